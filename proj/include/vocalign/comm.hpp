#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "vocalign/common.hpp"

namespace vocalign {

enum class Role { User, Assistant };

std::string role_name(Role role);

struct CommMessage {
    double timestamp_s = 0.0; // seconds since the epoch, UTC
    std::string group;
    std::string session;
    int turn_index = 0;
    Role role = Role::User;
    std::string text;
};

struct CommReport {
    std::string group;
    std::size_t messages = 0;
    double avg_words_per_message = 0.0;
    std::map<Role, double> avg_words_by_role;
    std::optional<double> avg_response_time_s; // null when no pair exists
    std::vector<std::pair<int, double>> density_by_turn;
};

// Seconds since 1970-01-01T00:00:00Z for an ISO 8601 timestamp; the zone
// designator (Z or +-HH:MM) is required. Throws SchemaError.
double parse_iso8601(std::string_view text);

// Log CSV with header timestamp,group,session,turn_index,role,text. Rows
// come back in canonical (group, session, turn_index, timestamp) order
// whatever the input order. Throws SchemaError; an empty file is an empty
// list, not an error.
std::vector<CommMessage> parse_comm_log(std::string_view csv_text);

void canonical_sort(std::vector<CommMessage>& messages);

// Mean whitespace-token count per message. Throws EmptyLog.
double avg_words(const std::vector<CommMessage>& messages);

// Per-role mean word count; a role missing from the log is missing from the
// map. Throws EmptyLog.
std::map<Role, double> words_by_role(const std::vector<CommMessage>& messages);

// Mean seconds between each assistant message and the latest unconsumed
// user message before it in the same session. With any_gap, the mean gap
// between session-adjacent messages regardless of role. Throws NoPairs.
double avg_response_time(const std::vector<CommMessage>& messages, bool any_gap = false);

// Length-normalized Shannon entropy of the lowercased whitespace tokens:
// H / log2(1 + n), 0 when n <= 1. Always in [0, 1].
double adjusted_density(std::string_view text);

// Per-turn mean density across the sessions of one group, then a trailing
// moving average of `window` turns. Throws EmptyLog.
std::vector<std::pair<int, double>> density_evolution(
    const std::vector<CommMessage>& messages, int window);

struct CommOptions {
    int window = 1;
    bool any_gap = false;
};

// One report per group, groups in name order. Throws EmptyLog when the log
// has no messages.
std::vector<CommReport> comm_report(std::vector<CommMessage> messages,
                                    const CommOptions& options = {});

std::string comm_report_json(const std::vector<CommReport>& reports);

// group,turn_index,adjusted_density rows for plotting.
std::string density_csv(const std::vector<CommReport>& reports);

} // namespace vocalign
