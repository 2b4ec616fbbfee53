#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace sumsq::cli {

/// One machine-readable result line. Absent optionals are omitted from the
/// JSON, except t_star which is written as null when `values` is present.
struct OutputRecord {
  std::string command;
  std::optional<std::int64_t> m;
  std::optional<std::int64_t> n;
  std::optional<std::int64_t> T;
  std::optional<std::int64_t> lo;
  std::optional<std::int64_t> hi;
  std::vector<std::int64_t> coeffs;
  std::optional<std::vector<std::int64_t>> values;
  std::optional<std::int64_t> t_star;
  std::optional<int> parity;
  std::optional<bool> full;
  std::optional<bool> member;
  std::optional<std::string> method;
  std::optional<std::string> reason;
  nlohmann::json extra = nlohmann::json::object();
  std::int64_t micros = 0;

  friend bool operator==(const OutputRecord&, const OutputRecord&) = default;
};

namespace detail {

template <class T>
void put(nlohmann::json& j, const char* key, const std::optional<T>& v) {
  if (v) j[key] = *v;
}

template <class T>
void get(const nlohmann::json& j, const char* key, std::optional<T>& v) {
  if (auto it = j.find(key); it != j.end() && !it->is_null()) {
    v = it->get<T>();
  } else {
    v.reset();
  }
}

}  // namespace detail

inline void to_json(nlohmann::json& j, const OutputRecord& r) {
  j = nlohmann::json::object();
  j["command"] = r.command;
  detail::put(j, "m", r.m);
  detail::put(j, "n", r.n);
  detail::put(j, "T", r.T);
  detail::put(j, "lo", r.lo);
  detail::put(j, "hi", r.hi);
  if (!r.coeffs.empty()) j["coeffs"] = r.coeffs;
  detail::put(j, "values", r.values);
  if (r.t_star) {
    j["t_star"] = *r.t_star;
  } else if (r.values) {
    j["t_star"] = nullptr;
  }
  detail::put(j, "parity", r.parity);
  detail::put(j, "full", r.full);
  detail::put(j, "member", r.member);
  detail::put(j, "method", r.method);
  detail::put(j, "reason", r.reason);
  if (!r.extra.empty()) j["extra"] = r.extra;
  j["micros"] = r.micros;
}

inline void from_json(const nlohmann::json& j, OutputRecord& r) {
  r.command = j.at("command").get<std::string>();
  detail::get(j, "m", r.m);
  detail::get(j, "n", r.n);
  detail::get(j, "T", r.T);
  detail::get(j, "lo", r.lo);
  detail::get(j, "hi", r.hi);
  r.coeffs = j.value("coeffs", std::vector<std::int64_t>{});
  detail::get(j, "values", r.values);
  detail::get(j, "t_star", r.t_star);
  detail::get(j, "parity", r.parity);
  detail::get(j, "full", r.full);
  detail::get(j, "member", r.member);
  detail::get(j, "method", r.method);
  detail::get(j, "reason", r.reason);
  r.extra = j.value("extra", nlohmann::json::object());
  r.micros = j.at("micros").get<std::int64_t>();
}

inline std::string serialize(const OutputRecord& r) { return nlohmann::json(r).dump(); }

inline OutputRecord parse_record(const std::string& line) { return nlohmann::json::parse(line).get<OutputRecord>(); }

}  // namespace sumsq::cli
