#include "vocalign/zip_reader.hpp"

#include <cstdint>
#include <cstring>
#include <fstream>
#include <sstream>

#include <zlib.h>

#include "vocalign/common.hpp"

namespace vocalign::zip {

namespace {

constexpr std::uint32_t kEocdSig = 0x06054b50;
constexpr std::uint32_t kCentralSig = 0x02014b50;
constexpr std::uint32_t kLocalSig = 0x04034b50;

std::uint16_t rd16(const std::string& b, std::size_t off) {
    return static_cast<std::uint8_t>(b[off]) |
           (static_cast<std::uint16_t>(static_cast<std::uint8_t>(b[off + 1])) << 8);
}

std::uint32_t rd32(const std::string& b, std::size_t off) {
    return static_cast<std::uint8_t>(b[off]) |
           (static_cast<std::uint32_t>(static_cast<std::uint8_t>(b[off + 1])) << 8) |
           (static_cast<std::uint32_t>(static_cast<std::uint8_t>(b[off + 2])) << 16) |
           (static_cast<std::uint32_t>(static_cast<std::uint8_t>(b[off + 3])) << 24);
}

void wr16(std::string& b, std::uint16_t v) {
    b += static_cast<char>(v & 0xff);
    b += static_cast<char>((v >> 8) & 0xff);
}

void wr32(std::string& b, std::uint32_t v) {
    b += static_cast<char>(v & 0xff);
    b += static_cast<char>((v >> 8) & 0xff);
    b += static_cast<char>((v >> 16) & 0xff);
    b += static_cast<char>((v >> 24) & 0xff);
}

std::string inflate_raw(const std::string& compressed, std::size_t expected_size,
                        std::string& error) {
    std::string out;
    out.resize(expected_size);
    z_stream zs;
    std::memset(&zs, 0, sizeof(zs));
    if (inflateInit2(&zs, -MAX_WBITS) != Z_OK) {
        error = "inflate init failed";
        return {};
    }
    zs.next_in = reinterpret_cast<Bytef*>(const_cast<char*>(compressed.data()));
    zs.avail_in = static_cast<uInt>(compressed.size());
    zs.next_out = reinterpret_cast<Bytef*>(out.data());
    zs.avail_out = static_cast<uInt>(out.size());
    const int rc = inflate(&zs, Z_FINISH);
    const std::size_t produced = out.size() - zs.avail_out;
    inflateEnd(&zs);
    if (rc != Z_STREAM_END || produced != expected_size) {
        error = "deflate stream damaged";
        return {};
    }
    return out;
}

std::uint32_t crc_of(const std::string& data) {
    return static_cast<std::uint32_t>(
        ::crc32(0L, reinterpret_cast<const Bytef*>(data.data()),
                static_cast<uInt>(data.size())));
}

} // namespace

std::vector<Entry> read_archive(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw SourceNotFound("cannot open " + path);
    std::ostringstream raw;
    raw << in.rdbuf();
    const std::string buf = std::move(raw).str();

    if (buf.size() < 22)
        throw ArchiveCorrupt(path + ": too small to hold an end-of-central-directory record");

    // EOCD may be followed by a comment of up to 65535 bytes; scan backwards.
    const std::size_t scan_floor =
        buf.size() > 22 + 65535 ? buf.size() - 22 - 65535 : 0;
    std::size_t eocd = std::string::npos;
    for (std::size_t i = buf.size() - 22 + 1; i-- > scan_floor;) {
        if (rd32(buf, i) == kEocdSig) {
            eocd = i;
            break;
        }
    }
    if (eocd == std::string::npos)
        throw ArchiveCorrupt(path + ": end-of-central-directory record not found");

    const std::uint16_t disk = rd16(buf, eocd + 4);
    const std::uint16_t entry_count = rd16(buf, eocd + 10);
    const std::uint32_t cd_size = rd32(buf, eocd + 12);
    const std::uint32_t cd_offset = rd32(buf, eocd + 16);
    if (disk != 0)
        throw ArchiveCorrupt(path + ": multi-disk archives unsupported");
    if (entry_count == 0xffff || cd_size == 0xffffffff || cd_offset == 0xffffffff)
        throw ArchiveCorrupt(path + ": zip64 archives unsupported");
    if (static_cast<std::size_t>(cd_offset) + cd_size > buf.size())
        throw ArchiveCorrupt(path + ": central directory extends past end of file");

    std::vector<Entry> entries;
    std::size_t pos = cd_offset;
    for (int i = 0; i < entry_count; ++i) {
        if (pos + 46 > buf.size() || rd32(buf, pos) != kCentralSig)
            throw ArchiveCorrupt(path + ": central directory entry " + std::to_string(i) +
                                 " unreadable");
        const std::uint16_t method = rd16(buf, pos + 10);
        const std::uint32_t crc = rd32(buf, pos + 16);
        const std::uint32_t csize = rd32(buf, pos + 20);
        const std::uint32_t usize = rd32(buf, pos + 24);
        const std::uint16_t name_len = rd16(buf, pos + 28);
        const std::uint16_t extra_len = rd16(buf, pos + 30);
        const std::uint16_t comment_len = rd16(buf, pos + 32);
        const std::uint32_t local_off = rd32(buf, pos + 42);
        if (pos + 46 + name_len > buf.size())
            throw ArchiveCorrupt(path + ": entry name extends past end of file");
        if (csize == 0xffffffff || usize == 0xffffffff)
            throw ArchiveCorrupt(path + ": zip64 archives unsupported");

        Entry e;
        e.path = buf.substr(pos + 46, name_len);
        e.is_dir = !e.path.empty() && e.path.back() == '/';
        pos += 46 + name_len + extra_len + comment_len;

        if (e.is_dir) {
            entries.push_back(std::move(e));
            continue;
        }

        if (static_cast<std::size_t>(local_off) + 30 > buf.size() ||
            rd32(buf, local_off) != kLocalSig) {
            e.error = "local header unreadable";
            entries.push_back(std::move(e));
            continue;
        }
        const std::uint16_t lname = rd16(buf, local_off + 26);
        const std::uint16_t lextra = rd16(buf, local_off + 28);
        const std::size_t data_off =
            static_cast<std::size_t>(local_off) + 30 + lname + lextra;
        if (data_off + csize > buf.size()) {
            e.error = "entry data truncated";
            entries.push_back(std::move(e));
            continue;
        }
        const std::string data = buf.substr(data_off, csize);

        if (method == 0) {
            e.content = data;
        } else if (method == 8) {
            e.content = inflate_raw(data, usize, e.error);
        } else {
            e.error = "unsupported compression method " + std::to_string(method);
        }
        if (e.error.empty()) {
            e.crc_ok = crc_of(e.content) == crc;
            if (!e.crc_ok)
                e.error = "crc mismatch";
        }
        entries.push_back(std::move(e));
    }
    return entries;
}

std::string build_archive(const std::vector<std::pair<std::string, std::string>>& entries) {
    std::string out;
    struct Central {
        std::string path;
        std::uint32_t crc, size, offset;
    };
    std::vector<Central> centrals;

    for (const auto& [path, content] : entries) {
        Central c;
        c.path = path;
        c.crc = content.empty() ? 0 : crc_of(content);
        c.size = static_cast<std::uint32_t>(content.size());
        c.offset = static_cast<std::uint32_t>(out.size());
        wr32(out, kLocalSig);
        wr16(out, 20); // version needed
        wr16(out, 0);  // flags
        wr16(out, 0);  // method: stored
        wr16(out, 0);  // mod time
        wr16(out, 0);  // mod date
        wr32(out, c.crc);
        wr32(out, c.size);
        wr32(out, c.size);
        wr16(out, static_cast<std::uint16_t>(path.size()));
        wr16(out, 0); // extra len
        out += path;
        out += content;
        centrals.push_back(std::move(c));
    }

    const std::uint32_t cd_offset = static_cast<std::uint32_t>(out.size());
    for (const Central& c : centrals) {
        wr32(out, kCentralSig);
        wr16(out, 20); // version made by
        wr16(out, 20); // version needed
        wr16(out, 0);  // flags
        wr16(out, 0);  // method
        wr16(out, 0);  // time
        wr16(out, 0);  // date
        wr32(out, c.crc);
        wr32(out, c.size);
        wr32(out, c.size);
        wr16(out, static_cast<std::uint16_t>(c.path.size()));
        wr16(out, 0); // extra
        wr16(out, 0); // comment
        wr16(out, 0); // disk
        wr16(out, 0); // internal attrs
        wr32(out, 0); // external attrs
        wr32(out, c.offset);
        out += c.path;
    }
    const std::uint32_t cd_size = static_cast<std::uint32_t>(out.size()) - cd_offset;

    wr32(out, kEocdSig);
    wr16(out, 0); // disk
    wr16(out, 0); // cd disk
    wr16(out, static_cast<std::uint16_t>(centrals.size()));
    wr16(out, static_cast<std::uint16_t>(centrals.size()));
    wr32(out, cd_size);
    wr32(out, cd_offset);
    wr16(out, 0); // comment len
    return out;
}

} // namespace vocalign::zip
