#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace dynconn {

// One line of the metrics stream, emitted per user update.
struct UpdateRecord {
  std::uint64_t t = 0;
  std::string op;
  std::vector<std::uint64_t> level_insertions;
  std::vector<std::uint64_t> level_deletions;
  std::uint64_t f_lambda_changes = 0;
  std::uint64_t restarts = 0;
  std::uint64_t nanos = 0;
};

inline std::string to_jsonl(const UpdateRecord& r) {
  std::string out = "{\"t\":" + std::to_string(r.t) + ",\"op\":\"" + r.op + "\"";
  auto arr = [&](const char* key, const std::vector<std::uint64_t>& v) {
    out += ",\"";
    out += key;
    out += "\":[";
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (i) out += ',';
      out += std::to_string(v[i]);
    }
    out += ']';
  };
  arr("level_insertions", r.level_insertions);
  arr("level_deletions", r.level_deletions);
  out += ",\"f_lambda_changes\":" + std::to_string(r.f_lambda_changes);
  out += ",\"restarts\":" + std::to_string(r.restarts);
  out += ",\"nanos\":" + std::to_string(r.nanos);
  out += "}";
  return out;
}

}  // namespace dynconn
