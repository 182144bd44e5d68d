#pragma once

#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

namespace tgk {

enum class ClaimStatus { pass, fail, report };

inline const char* to_string(ClaimStatus s) {
  switch (s) {
    case ClaimStatus::pass: return "pass";
    case ClaimStatus::fail: return "fail";
    case ClaimStatus::report: return "report";
  }
  return "report";
}

// One audited claim. `tolerance` is NaN for report-only entries.
struct ClaimEntry {
  std::string id;
  std::string anchor;
  std::string quantity;
  double measured = 0.0;
  double tolerance = std::numeric_limits<double>::quiet_NaN();
  ClaimStatus status = ClaimStatus::report;
  std::vector<std::pair<std::string, double>> values;
  std::string note;

  ClaimEntry& value(std::string key, double v) {
    values.emplace_back(std::move(key), v);
    return *this;
  }
};

// Entry whose status follows measured <= tolerance.
inline ClaimEntry asserted_claim(std::string id, std::string anchor, std::string quantity, double measured,
                                 double tolerance) {
  ClaimEntry e;
  e.id = std::move(id);
  e.anchor = std::move(anchor);
  e.quantity = std::move(quantity);
  e.measured = measured;
  e.tolerance = tolerance;
  e.status = (std::isfinite(measured) && measured <= tolerance) ? ClaimStatus::pass : ClaimStatus::fail;
  return e;
}

inline ClaimEntry reported_claim(std::string id, std::string anchor, std::string quantity, double measured) {
  ClaimEntry e;
  e.id = std::move(id);
  e.anchor = std::move(anchor);
  e.quantity = std::move(quantity);
  e.measured = measured;
  e.status = ClaimStatus::report;
  return e;
}

namespace detail {

inline std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

// JSON has no NaN/Inf; such values are written as strings.
inline nlohmann::ordered_json json_number(double v) {
  if (std::isfinite(v)) return v;
  return format_double(v);
}

}  // namespace detail

class ClaimLedger {
 public:
  void add(ClaimEntry e) { entries_.push_back(std::move(e)); }
  const std::vector<ClaimEntry>& entries() const noexcept { return entries_; }
  bool empty() const noexcept { return entries_.empty(); }

  bool all_passed() const {
    for (const auto& e : entries_) {
      if (e.status == ClaimStatus::fail) return false;
    }
    return true;
  }

  const ClaimEntry* find(const std::string& id) const {
    for (const auto& e : entries_) {
      if (e.id == id) return &e;
    }
    return nullptr;
  }

  nlohmann::ordered_json to_json() const {
    nlohmann::ordered_json list = nlohmann::ordered_json::array();
    for (const auto& e : entries_) {
      nlohmann::ordered_json j;
      j["id"] = e.id;
      j["anchor"] = e.anchor;
      j["quantity"] = e.quantity;
      j["measured"] = detail::json_number(e.measured);
      j["tolerance"] = std::isnan(e.tolerance) ? nlohmann::ordered_json(nullptr) : detail::json_number(e.tolerance);
      j["status"] = to_string(e.status);
      nlohmann::ordered_json vals = nlohmann::ordered_json::object();
      for (const auto& [k, v] : e.values) vals[k] = detail::json_number(v);
      j["values"] = vals;
      if (!e.note.empty()) j["note"] = e.note;
      list.push_back(std::move(j));
    }
    nlohmann::ordered_json root;
    root["entries"] = list;
    return root;
  }

  std::string to_csv() const {
    std::ostringstream os;
    os << "id,anchor,quantity,measured,tolerance,status\n";
    for (const auto& e : entries_) {
      os << detail::csv_field(e.id) << ',' << detail::csv_field(e.anchor) << ',' << detail::csv_field(e.quantity)
         << ',' << detail::format_double(e.measured) << ','
         << (std::isnan(e.tolerance) ? std::string() : detail::format_double(e.tolerance)) << ','
         << to_string(e.status) << '\n';
    }
    return os.str();
  }

 private:
  std::vector<ClaimEntry> entries_;
};

}  // namespace tgk
