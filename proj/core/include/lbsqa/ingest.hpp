#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "lbsqa/types.hpp"

namespace lbsqa {

/// Column positions in the delimited input. -1 marks an absent column
/// (only accuracy_m may be absent).
struct ColumnMap {
    int user_id = 0;
    int timestamp = 1;
    int lat = 2;
    int lon = 3;
    int accuracy_m = 4;

    int max_required() const;
};

enum class OnBadRecord { kSkip, kAbort };

/// Parses one delimited record into a validated Ping.
/// Timestamps may be integer epoch seconds or ISO-8601
/// (YYYY-MM-DDTHH:MM:SS with optional Z / +-HH:MM zone, default UTC).
/// Throws ParseError (with line_no) on malformed or out-of-range fields.
Ping parse_ping_record(std::string_view line, const ColumnMap& schema, std::size_t line_no = 0);

/// Semantic inverse of parse_ping_record for the default column order.
std::string serialize_ping(const Ping& p);

struct IngestResult {
    std::vector<Ping> pings;
    std::size_t skipped_records = 0;
    std::size_t total_records = 0;
};

/// Reads a header-bearing delimited ping file. '#' comment lines are ignored.
/// Bad records are skipped (counted) or abort ingestion per `on_bad`.
IngestResult read_pings_csv(const std::string& path, const ColumnMap& schema,
                            OnBadRecord on_bad = OnBadRecord::kSkip);

/// Groups pings into user-days by local calendar date under a fixed UTC
/// offset. Within each day pings are sorted ascending; duplicate
/// (user, timestamp) pairs collapse to the first-seen record. Output is
/// sorted by (user_id, day_id).
std::vector<UserDay> partition_user_days(std::span<const Ping> pings, int tz_offset_minutes);

/// Asserts the UserDay invariants (strictly ascending timestamps, every ping
/// inside the local day window). Returns the day unchanged.
/// Throws ValidationError naming the violated invariant.
const UserDay& validate_user_day(const UserDay& day);

Corpus build_corpus(std::vector<Ping> pings, int tz_offset_minutes,
                    std::vector<std::string> provenance = {});

/// Writes a corpus back out in the default input format.
void write_pings_csv(const Corpus& corpus, const std::string& path);

}  // namespace lbsqa
