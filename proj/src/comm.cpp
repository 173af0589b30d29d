#include "vocalign/comm.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <map>
#include <tuple>
#include <unordered_map>

#include <json.hpp>

#include "vocalign/csv.hpp"

namespace vocalign {

namespace {

// days since 1970-01-01 for a proleptic Gregorian civil date
std::int64_t days_from_civil(int y, unsigned m, unsigned d) {
    y -= m <= 2;
    const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
    const auto yoe = static_cast<unsigned>(y - era * 400);
    const unsigned doy = (153 * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;
    const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
    return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

unsigned days_in_month(int y, unsigned m) {
    static const unsigned lengths[] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
    if (m == 2) {
        const bool leap = (y % 4 == 0 && y % 100 != 0) || y % 400 == 0;
        return leap ? 29 : 28;
    }
    return lengths[m - 1];
}

[[noreturn]] void bad_timestamp(std::string_view text) {
    throw SchemaError("invalid ISO 8601 timestamp: '" + std::string(text) + "'");
}

int take_digits(std::string_view text, std::size_t& pos, int count,
                std::string_view whole) {
    int value = 0;
    for (int i = 0; i < count; ++i) {
        if (pos >= text.size() || !std::isdigit(static_cast<unsigned char>(text[pos])))
            bad_timestamp(whole);
        value = value * 10 + (text[pos] - '0');
        ++pos;
    }
    return value;
}

void expect(std::string_view text, std::size_t& pos, char c, std::string_view whole) {
    if (pos >= text.size() || text[pos] != c)
        bad_timestamp(whole);
    ++pos;
}

std::vector<std::string> split_words(std::string_view text) {
    std::vector<std::string> words;
    std::size_t i = 0;
    while (i < text.size()) {
        while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i])))
            ++i;
        std::size_t start = i;
        while (i < text.size() && !std::isspace(static_cast<unsigned char>(text[i])))
            ++i;
        if (i > start)
            words.emplace_back(text.substr(start, i - start));
    }
    return words;
}

std::size_t word_count(std::string_view text) {
    std::size_t n = 0;
    std::size_t i = 0;
    while (i < text.size()) {
        while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i])))
            ++i;
        if (i < text.size())
            ++n;
        while (i < text.size() && !std::isspace(static_cast<unsigned char>(text[i])))
            ++i;
    }
    return n;
}

} // namespace

std::string role_name(Role role) { return role == Role::User ? "user" : "assistant"; }

double parse_iso8601(std::string_view text) {
    std::size_t pos = 0;
    const int year = take_digits(text, pos, 4, text);
    expect(text, pos, '-', text);
    const int month = take_digits(text, pos, 2, text);
    expect(text, pos, '-', text);
    const int day = take_digits(text, pos, 2, text);
    if (month < 1 || month > 12 || day < 1 ||
        day > static_cast<int>(days_in_month(year, static_cast<unsigned>(month))))
        bad_timestamp(text);
    if (pos >= text.size() || (text[pos] != 'T' && text[pos] != 't' && text[pos] != ' '))
        bad_timestamp(text);
    ++pos;
    const int hour = take_digits(text, pos, 2, text);
    expect(text, pos, ':', text);
    const int minute = take_digits(text, pos, 2, text);
    expect(text, pos, ':', text);
    const int second = take_digits(text, pos, 2, text);
    if (hour > 23 || minute > 59 || second > 60) // 60 tolerates leap-second stamps
        bad_timestamp(text);

    double fraction = 0.0;
    if (pos < text.size() && (text[pos] == '.' || text[pos] == ',')) {
        ++pos;
        double scale = 0.1;
        bool any = false;
        while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) {
            fraction += (text[pos] - '0') * scale;
            scale /= 10.0;
            ++pos;
            any = true;
        }
        if (!any)
            bad_timestamp(text);
    }

    // zone designator is mandatory: these logs cross machines
    if (pos >= text.size())
        bad_timestamp(text);
    int offset_minutes = 0;
    const char z = text[pos];
    if (z == 'Z' || z == 'z') {
        ++pos;
    } else if (z == '+' || z == '-') {
        ++pos;
        const int oh = take_digits(text, pos, 2, text);
        int om = 0;
        if (pos < text.size()) {
            if (text[pos] == ':')
                ++pos;
            if (pos < text.size())
                om = take_digits(text, pos, 2, text);
        }
        if (oh > 23 || om > 59)
            bad_timestamp(text);
        offset_minutes = (oh * 60 + om) * (z == '+' ? 1 : -1);
    } else {
        bad_timestamp(text);
    }
    if (pos != text.size())
        bad_timestamp(text);

    const std::int64_t days =
        days_from_civil(year, static_cast<unsigned>(month), static_cast<unsigned>(day));
    const std::int64_t local = days * 86400 + hour * 3600 + minute * 60 + second;
    return static_cast<double>(local - offset_minutes * 60) + fraction;
}

std::vector<CommMessage> parse_comm_log(std::string_view csv_text) {
    static const std::vector<std::string> kHeader = {"timestamp", "group",      "session",
                                                     "turn_index", "role",      "text"};
    const auto rows = csv::parse(csv_text);
    if (rows.empty())
        return {};
    if (rows.front() != kHeader)
        throw SchemaError("log header must be timestamp,group,session,turn_index,role,text");

    std::vector<CommMessage> messages;
    messages.reserve(rows.size() - 1);
    for (std::size_t r = 1; r < rows.size(); ++r) {
        const auto& row = rows[r];
        if (row.size() != kHeader.size())
            throw SchemaError("log row " + std::to_string(r + 1) + " has " +
                              std::to_string(row.size()) + " fields, expected 6");
        CommMessage m;
        m.timestamp_s = parse_iso8601(row[0]);
        m.group = row[1];
        m.session = row[2];
        int turn = 0;
        const auto [ptr, ec] =
            std::from_chars(row[3].data(), row[3].data() + row[3].size(), turn);
        if (ec != std::errc() || ptr != row[3].data() + row[3].size() || turn < 0)
            throw SchemaError("log row " + std::to_string(r + 1) +
                              ": turn_index must be an integer >= 0, got '" + row[3] + "'");
        m.turn_index = turn;
        std::string role = row[4];
        std::transform(role.begin(), role.end(), role.begin(),
                       [](unsigned char c) { return std::tolower(c); });
        if (role == "user")
            m.role = Role::User;
        else if (role == "assistant")
            m.role = Role::Assistant;
        else
            throw SchemaError("log row " + std::to_string(r + 1) +
                              ": role must be user or assistant, got '" + row[4] + "'");
        m.text = row[5];
        messages.push_back(std::move(m));
    }
    canonical_sort(messages);
    return messages;
}

void canonical_sort(std::vector<CommMessage>& messages) {
    std::sort(messages.begin(), messages.end(),
              [](const CommMessage& a, const CommMessage& b) {
                  const int ra = static_cast<int>(a.role);
                  const int rb = static_cast<int>(b.role);
                  return std::tie(a.group, a.session, a.turn_index, a.timestamp_s, ra,
                                  a.text) < std::tie(b.group, b.session, b.turn_index,
                                                     b.timestamp_s, rb, b.text);
              });
}

double avg_words(const std::vector<CommMessage>& messages) {
    if (messages.empty())
        throw EmptyLog("avg_words: no messages");
    std::size_t words = 0;
    for (const auto& m : messages)
        words += word_count(m.text);
    return static_cast<double>(words) / static_cast<double>(messages.size());
}

std::map<Role, double> words_by_role(const std::vector<CommMessage>& messages) {
    if (messages.empty())
        throw EmptyLog("words_by_role: no messages");
    std::map<Role, std::pair<std::size_t, std::size_t>> acc; // words, count
    for (const auto& m : messages) {
        auto& [words, count] = acc[m.role];
        words += word_count(m.text);
        ++count;
    }
    std::map<Role, double> out;
    for (const auto& [role, wc] : acc)
        out[role] = static_cast<double>(wc.first) / static_cast<double>(wc.second);
    return out;
}

double avg_response_time(const std::vector<CommMessage>& messages, bool any_gap) {
    double sum = 0.0;
    std::size_t pairs = 0;
    if (any_gap) {
        std::map<std::pair<std::string, std::string>, double> last;
        for (const auto& m : messages) {
            const auto key = std::make_pair(m.group, m.session);
            const auto it = last.find(key);
            if (it != last.end()) {
                sum += m.timestamp_s - it->second;
                ++pairs;
            }
            last[key] = m.timestamp_s;
        }
    } else {
        std::map<std::pair<std::string, std::string>, std::vector<double>> unconsumed;
        for (const auto& m : messages) {
            auto& stack = unconsumed[std::make_pair(m.group, m.session)];
            if (m.role == Role::User) {
                stack.push_back(m.timestamp_s);
            } else if (!stack.empty()) {
                sum += m.timestamp_s - stack.back();
                stack.pop_back();
                ++pairs;
            }
        }
    }
    if (pairs == 0)
        throw NoPairs(any_gap ? "avg_response_time: no session has two messages"
                              : "avg_response_time: no user->assistant pair");
    return sum / static_cast<double>(pairs);
}

double adjusted_density(std::string_view text) {
    std::string lowered(text);
    std::transform(lowered.begin(), lowered.end(), lowered.begin(),
                   [](unsigned char c) { return std::tolower(c); });
    const auto tokens = split_words(lowered);
    if (tokens.size() <= 1)
        return 0.0;
    std::unordered_map<std::string, std::size_t> freq;
    for (const auto& t : tokens)
        ++freq[t];
    const double n = static_cast<double>(tokens.size());
    double h = 0.0;
    for (const auto& [_, count] : freq) {
        const double p = static_cast<double>(count) / n;
        h -= p * std::log2(p);
    }
    return h / std::log2(1.0 + n);
}

std::vector<std::pair<int, double>> density_evolution(
    const std::vector<CommMessage>& messages, int window) {
    if (messages.empty())
        throw EmptyLog("density_evolution: no messages");
    if (window < 1)
        window = 1;
    std::map<int, std::pair<double, std::size_t>> by_turn; // sum, count
    for (const auto& m : messages) {
        auto& [sum, count] = by_turn[m.turn_index];
        sum += adjusted_density(m.text);
        ++count;
    }
    std::vector<std::pair<int, double>> raw;
    raw.reserve(by_turn.size());
    for (const auto& [turn, sc] : by_turn)
        raw.emplace_back(turn, sc.first / static_cast<double>(sc.second));

    std::vector<std::pair<int, double>> smoothed;
    smoothed.reserve(raw.size());
    for (std::size_t i = 0; i < raw.size(); ++i) {
        const std::size_t lo = i + 1 >= static_cast<std::size_t>(window)
                                   ? i + 1 - static_cast<std::size_t>(window)
                                   : 0;
        double sum = 0.0;
        for (std::size_t j = lo; j <= i; ++j)
            sum += raw[j].second;
        smoothed.emplace_back(raw[i].first, sum / static_cast<double>(i - lo + 1));
    }
    return smoothed;
}

std::vector<CommReport> comm_report(std::vector<CommMessage> messages,
                                    const CommOptions& options) {
    if (messages.empty())
        throw EmptyLog("comm: log has no messages");
    canonical_sort(messages);

    std::vector<CommReport> reports;
    std::size_t start = 0;
    while (start < messages.size()) {
        std::size_t end = start;
        while (end < messages.size() && messages[end].group == messages[start].group)
            ++end;
        const std::vector<CommMessage> group(messages.begin() + start,
                                             messages.begin() + end);
        CommReport rep;
        rep.group = group.front().group;
        rep.messages = group.size();
        rep.avg_words_per_message = avg_words(group);
        rep.avg_words_by_role = words_by_role(group);
        try {
            rep.avg_response_time_s = avg_response_time(group, options.any_gap);
        } catch (const NoPairs&) {
            rep.avg_response_time_s = std::nullopt;
        }
        rep.density_by_turn = density_evolution(group, options.window);
        reports.push_back(std::move(rep));
        start = end;
    }
    return reports;
}

std::string comm_report_json(const std::vector<CommReport>& reports) {
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const auto& r : reports) {
        nlohmann::ordered_json obj;
        obj["group"] = r.group;
        obj["messages"] = r.messages;
        obj["avg_words_per_message"] = r.avg_words_per_message;
        nlohmann::ordered_json roles;
        for (const auto& [role, mean] : r.avg_words_by_role)
            roles[role_name(role)] = mean;
        obj["avg_words_by_role"] = roles;
        if (r.avg_response_time_s)
            obj["avg_response_time_s"] = *r.avg_response_time_s;
        else
            obj["avg_response_time_s"] = nullptr;
        nlohmann::ordered_json series = nlohmann::ordered_json::array();
        for (const auto& [turn, density] : r.density_by_turn)
            series.push_back({{"turn_index", turn}, {"adjusted_density", density}});
        obj["density_by_turn"] = series;
        arr.push_back(std::move(obj));
    }
    return arr.dump(2) + "\n";
}

std::string density_csv(const std::vector<CommReport>& reports) {
    std::string out = "group,turn_index,adjusted_density\n";
    for (const auto& r : reports) {
        for (const auto& [turn, density] : r.density_by_turn) {
            out += csv::escape(r.group);
            out += ',';
            out += std::to_string(turn);
            out += ',';
            out += csv::format_full(density);
            out += '\n';
        }
    }
    return out;
}

} // namespace vocalign
