#include "cli.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cstdlib>
#include <functional>
#include <iomanip>
#include <iostream>
#include <limits>
#include <random>
#include <sstream>

#include <CLI11.hpp>

#include "record.hpp"
#include "sumsq/sumsq.hpp"

namespace sumsq::cli {

namespace {

using Clock = std::chrono::steady_clock;

std::int64_t micros_since(Clock::time_point start) {
  return std::chrono::duration_cast<std::chrono::microseconds>(Clock::now() - start).count();
}

double nanos_between(Clock::time_point a, Clock::time_point b) {
  return std::chrono::duration<double, std::nano>(b - a).count();
}

}  // namespace

std::int64_t parse_integer(std::string_view text) {
  std::string s;
  for (char c : text) {
    if (c != '_') s += c;
  }
  if (s.empty()) throw UsageError("expected an integer, got '" + std::string(text) + "'");
  std::size_t pos = 0;
  const bool negative = s[0] == '-';
  if (s[0] == '-' || s[0] == '+') ++pos;

  std::string digits;
  int fraction = 0;
  bool dot = false;
  for (; pos < s.size() && s[pos] != 'e' && s[pos] != 'E'; ++pos) {
    if (s[pos] >= '0' && s[pos] <= '9') {
      digits += s[pos];
      if (dot) ++fraction;
    } else if (s[pos] == '.' && !dot) {
      dot = true;
    } else {
      throw UsageError("expected an integer, got '" + std::string(text) + "'");
    }
  }
  if (digits.empty()) throw UsageError("expected an integer, got '" + std::string(text) + "'");

  long long exponent = 0;
  if (pos < s.size()) {
    const char* first = s.data() + pos + 1;
    const char* last = s.data() + s.size();
    if (first < last && *first == '+') ++first;
    auto [end, ec] = std::from_chars(first, last, exponent);
    if (ec != std::errc() || end != last || first == last) {
      throw UsageError("bad exponent in '" + std::string(text) + "'");
    }
  }
  exponent -= fraction;

  if (exponent < 0) {
    const auto drop = static_cast<std::size_t>(std::min<long long>(-exponent, static_cast<long long>(digits.size())));
    if (digits.find_first_not_of('0', digits.size() - drop) != std::string::npos) {
      throw UsageError("'" + std::string(text) + "' is not an integer");
    }
    digits.resize(digits.size() - drop);
    exponent = 0;
  }
  digits.erase(0, std::min(digits.find_first_not_of('0'), digits.size()));
  if (digits.empty()) return 0;
  if (static_cast<long long>(digits.size()) + exponent > 19) {
    throw OverflowError("'" + std::string(text) + "' does not fit in 64 bits");
  }
  digits.append(static_cast<std::size_t>(exponent), '0');

  unsigned __int128 value = 0;
  for (char c : digits) value = value * 10 + static_cast<unsigned>(c - '0');
  const auto limit = static_cast<unsigned __int128>(std::numeric_limits<std::int64_t>::max()) + (negative ? 1 : 0);
  if (value > limit) throw OverflowError("'" + std::string(text) + "' does not fit in 64 bits");
  if (negative) return static_cast<std::int64_t>(-static_cast<__int128>(value));
  return static_cast<std::int64_t>(value);
}

std::pair<std::int64_t, std::int64_t> parse_range(std::string_view text) {
  const auto colon = text.find(':');
  if (colon == std::string_view::npos) {
    const std::int64_t v = parse_integer(text);
    return {v, v};
  }
  const std::int64_t lo = parse_integer(text.substr(0, colon));
  const std::int64_t hi = parse_integer(text.substr(colon + 1));
  if (lo > hi) throw UsageError("empty range '" + std::string(text) + "'");
  return {lo, hi};
}

std::vector<std::int64_t> parse_list(std::string_view text) {
  std::vector<std::int64_t> out;
  while (true) {
    const auto comma = text.find(',');
    out.push_back(parse_integer(text.substr(0, comma)));
    if (comma == std::string_view::npos) break;
    text.remove_prefix(comma + 1);
  }
  return out;
}

Budget resolve_budget(const std::optional<std::string>& flag, const char* env) {
  Budget b;
  std::optional<std::int64_t> nodes;
  if (flag) {
    nodes = parse_integer(*flag);
  } else if (env && *env) {
    nodes = parse_integer(env);
  }
  if (nodes) {
    if (*nodes < 1) throw UsageError("budget must be positive");
    b.max_nodes = static_cast<std::uint64_t>(*nodes);
  }
  return b;
}

std::string format_symmetric(const std::vector<std::int64_t>& nonnegative) {
  if (nonnegative.empty()) return "∅";
  std::string out;
  for (std::int64_t v : nonnegative) {
    if (!out.empty()) out += ' ';
    out += v == 0 ? "0" : "±" + std::to_string(v);
  }
  return out;
}

std::string format_factored(std::int64_t n) {
  if (n == 1) return "1";
  std::string out;
  for (const auto& [p, e] : factorize(n).factors) {
    if (!out.empty()) out += "·";
    out += std::to_string(p);
    if (e > 1) out += "^" + std::to_string(e);
  }
  return out;
}

namespace {

struct Options {
  std::string m;
  std::string n;
  std::string T;
  std::string range;
  std::string coeffs;
  std::string magnitudes = "1e6,1e9,1e12";
  std::optional<std::string> budget;
  std::string sample;
  std::string seed = "1";
  bool json = false;
  unsigned threads = std::max(1u, std::thread::hardware_concurrency());
};

struct Context {
  const Options& opt;
  Budget budget;
  std::ostream& out;
  std::ostream& err;

  void emit(const OutputRecord& r) const { out << serialize(r) << '\n'; }
};

std::int64_t require_int(const std::string& text, const char* flag) {
  if (text.empty()) throw UsageError(std::string("missing ") + flag);
  return parse_integer(text);
}

int require_m(const std::string& text) {
  const std::int64_t m = require_int(text, "-m");
  if (m < 1 || m > 1'000'000) throw DomainError("m must be in [1, 10^6]");
  return static_cast<int>(m);
}

std::pair<std::int64_t, std::int64_t> require_range(const std::string& text, const char* flag) {
  if (text.empty()) throw UsageError(std::string("missing ") + flag);
  return parse_range(text);
}

// -r lo:hi, or the single value given by -n.
std::pair<std::int64_t, std::int64_t> n_range(const Options& opt) {
  if (!opt.range.empty()) return parse_range(opt.range);
  const std::int64_t n = require_int(opt.n, "-n or -r");
  return {n, n};
}

std::vector<std::int64_t> require_coeffs(const Options& opt) {
  if (opt.coeffs.empty()) throw UsageError("missing -a");
  return parse_list(opt.coeffs);
}

std::string set_name(int m, std::int64_t n) { return "S_" + std::to_string(m) + "(" + std::to_string(n) + ")"; }

std::string yes_no(bool b) { return b ? "yes" : "no"; }

// Plain modulo reduction; unlike std::uniform_int_distribution it is the same
// on every standard library.
std::int64_t uniform(std::mt19937_64& rng, std::int64_t lo, std::int64_t hi) {
  const auto span = static_cast<std::uint64_t>(hi - lo) + 1;
  return lo + static_cast<std::int64_t>(span == 0 ? rng() : rng() % span);
}

// Column widths count code points, so Δ and ∅ line up.
std::size_t display_width(const std::string& s) {
  return static_cast<std::size_t>(std::count_if(s.begin(), s.end(), [](char c) { return (c & 0xC0) != 0x80; }));
}

void print_table(std::ostream& out, const std::vector<std::vector<std::string>>& rows) {
  std::vector<std::size_t> width;
  for (const auto& row : rows) {
    width.resize(std::max(width.size(), row.size()), 0);
    for (std::size_t i = 0; i < row.size(); ++i) width[i] = std::max(width[i], display_width(row[i]));
  }
  for (std::size_t r = 0; r < rows.size(); ++r) {
    std::string line;
    for (std::size_t i = 0; i < rows[r].size(); ++i) {
      if (i) line += " | ";
      line += rows[r][i];
      if (i + 1 < rows[r].size()) line.append(width[i] - display_width(rows[r][i]), ' ');
    }
    out << line << '\n';
    if (r == 0) {
      std::string rule;
      for (std::size_t i = 0; i < width.size(); ++i) {
        if (i) rule += "-+-";
        rule.append(width[i], '-');
      }
      out << rule << '\n';
    }
  }
}

OutputRecord set_record(const char* command, const SumSet& s, std::int64_t micros) {
  OutputRecord r;
  r.command = command;
  r.m = s.m;
  r.n = s.n;
  r.values = s.values;
  r.t_star = s.t_star;
  r.parity = s.parity;
  r.full = s.full;
  r.method = std::string(to_string(s.method));
  r.micros = micros;
  if (s.extremal) r.extra["extremal"] = *s.extremal;
  return r;
}

int cmd_set(const Context& ctx) {
  const int m = require_m(ctx.opt.m);
  const std::int64_t n = require_int(ctx.opt.n, "-n");
  const auto start = Clock::now();
  const SumSet s = full_set(m, n, ctx.budget);
  const auto micros = micros_since(start);
  if (ctx.opt.json) {
    ctx.emit(set_record("set", s, micros));
    return kOk;
  }
  ctx.out << set_name(m, n) << " = " << (s.empty() ? "∅" : "{" + format_symmetric(s.values) + "}") << '\n';
  ctx.out << "T* = " << (s.t_star ? std::to_string(*s.t_star) : "none") << ", full = " << yes_no(s.full)
          << ", method = " << to_string(s.method) << '\n';
  return kOk;
}

int cmd_member(const Context& ctx) {
  const int m = require_m(ctx.opt.m);
  const std::int64_t n = require_int(ctx.opt.n, "-n");
  const std::int64_t t = require_int(ctx.opt.T, "-T");
  const auto start = Clock::now();
  const bool member = contains(m, n, t, ctx.budget);
  const auto micros = micros_since(start);
  const auto method = std::string(to_string(method_for(m, n)));
  if (ctx.opt.json) {
    OutputRecord r;
    r.command = "member";
    r.m = m;
    r.n = n;
    r.T = t;
    r.member = member;
    r.method = method;
    r.micros = micros;
    ctx.emit(r);
  } else {
    ctx.out << t << (member ? " ∈ " : " ∉ ") << set_name(m, n) << "  (" << method << ")\n";
  }
  return kOk;
}

int cmd_tstar(const Context& ctx) {
  const int m = require_m(ctx.opt.m);
  const std::int64_t n = require_int(ctx.opt.n, "-n");
  const auto start = Clock::now();
  const auto top = t_star(m, n, ctx.budget);
  const auto micros = micros_since(start);
  if (ctx.opt.json) {
    OutputRecord r;
    r.command = "tstar";
    r.m = m;
    r.n = n;
    r.t_star = top;
    r.method = std::string(to_string(method_for(m, n)));
    r.micros = micros;
    ctx.emit(r);
  } else {
    ctx.out << "T*_" << m << "(" << n << ") = " << (top ? std::to_string(*top) : "none (set is empty)") << '\n';
  }
  return top ? kOk : kMismatch;
}

int cmd_table3(const Context& ctx) {
  const std::int64_t n = require_int(ctx.opt.n, "-n");
  const auto start = Clock::now();
  const auto rows = diagnose_m3(n);
  const SumSet s = full_set(3, n, ctx.budget);
  const auto micros = micros_since(start);
  if (ctx.opt.json) {
    for (const auto& row : rows) {
      OutputRecord r;
      r.command = "table3";
      r.m = 3;
      r.n = n;
      r.T = row.T;
      r.member = row.member;
      r.reason = row.reason;
      r.extra = {{"delta", row.delta}, {"d0", row.d0}, {"k", row.k}, {"ell", row.ell}, {"d", row.d}, {"q", row.q}};
      ctx.emit(r);
    }
    ctx.emit(set_record("table3", s, micros));
    return kOk;
  }
  std::vector<std::vector<std::string>> table = {{"T", "Δ", "D₀", "k", "ℓ", "d", "member", "reason"}};
  for (const auto& row : rows) {
    if (row.delta == 0) {
      table.push_back({std::to_string(row.T), "0", "-", "-", "-", std::to_string(row.d), yes_no(row.member),
                       row.reason});
    } else {
      table.push_back({std::to_string(row.T), std::to_string(row.delta), format_factored(row.d0),
                       std::to_string(row.k), std::to_string(row.ell), std::to_string(row.d), yes_no(row.member),
                       row.reason});
    }
  }
  print_table(ctx.out, table);
  ctx.out << '\n' << set_name(3, n) << " = " << (s.empty() ? "∅" : "{" + format_symmetric(s.values) + "}") << '\n';
  return kOk;
}

int cmd_scan_full(const Context& ctx) {
  const int m = require_m(ctx.opt.m);
  const auto [lo, hi] = require_range(ctx.opt.range, "-r");
  if (lo < 1) throw DomainError("n must be positive");
  constexpr std::int64_t kBlock = 4096;
  std::int64_t found = 0;
  const auto start = Clock::now();
  for (std::int64_t base = lo; base <= hi; base += kBlock) {
    const std::int64_t count = std::min(kBlock, hi - base + 1);
    const auto flags = parallel_map(static_cast<std::size_t>(count), ctx.opt.threads, [&](std::size_t i) {
      const auto t0 = Clock::now();
      const bool full = is_full(m, base + static_cast<std::int64_t>(i), ctx.budget);
      return std::pair{full, micros_since(t0)};
    });
    for (std::int64_t i = 0; i < count; ++i) {
      const auto& [full, micros] = flags[static_cast<std::size_t>(i)];
      if (full) continue;
      ++found;
      const std::int64_t n = base + i;
      if (ctx.opt.json) {
        OutputRecord r;
        r.command = "scan-full";
        r.m = m;
        r.n = n;
        r.full = false;
        r.method = std::string(to_string(method_for(m, n)));
        r.micros = micros;
        ctx.emit(r);
      } else {
        ctx.out << n << '\n';
      }
    }
    ctx.out.flush();
  }
  if (!ctx.opt.json) {
    ctx.out << found << " non-full n for m = " << m << " in [" << lo << ", " << hi << "] (" << micros_since(start)
            << " us)\n";
  }
  return kOk;
}

int cmd_crosscheck(const Context& ctx) {
  const auto [m_lo, m_hi] = require_range(ctx.opt.m, "-m");
  const auto [n_lo, n_hi] = require_range(ctx.opt.n, "-n");
  if (m_lo < 1 || n_lo < 1) throw DomainError("m and n must be positive");
  std::vector<std::pair<int, std::int64_t>> cases;
  if (!ctx.opt.sample.empty()) {
    const std::int64_t k = parse_integer(ctx.opt.sample);
    if (k < 1) throw UsageError("--sample must be positive");
    std::mt19937_64 rng(static_cast<std::uint64_t>(parse_integer(ctx.opt.seed)));
    for (std::int64_t i = 0; i < k; ++i) {
      cases.emplace_back(static_cast<int>(uniform(rng, m_lo, m_hi)), uniform(rng, n_lo, n_hi));
    }
  } else {
    for (std::int64_t m = m_lo; m <= m_hi; ++m) {
      for (std::int64_t n = n_lo; n <= n_hi; ++n) cases.emplace_back(static_cast<int>(m), n);
    }
  }
  const auto start = Clock::now();
  const auto results = parallel_map(cases.size(), ctx.opt.threads, [&](std::size_t i) {
    const auto [m, n] = cases[i];
    auto fast = full_set(m, n, ctx.budget).values;
    auto slow = attainable_sums(m, n, ctx.budget);
    return std::pair{std::move(fast), std::move(slow)};
  });
  const auto micros = micros_since(start);

  std::int64_t mismatches = 0;
  std::optional<std::size_t> first;
  for (std::size_t i = 0; i < results.size(); ++i) {
    if (results[i].first != results[i].second) {
      ++mismatches;
      if (!first) first = i;
    }
  }
  if (ctx.opt.json) {
    OutputRecord r;
    r.command = "crosscheck";
    r.micros = micros;
    r.extra = {{"checked", cases.size()}, {"mismatches", mismatches}};
    if (first) {
      r.m = cases[*first].first;
      r.n = cases[*first].second;
      r.values = results[*first].first;
      r.extra["oracle_values"] = results[*first].second;
    }
    ctx.emit(r);
  } else {
    ctx.out << cases.size() << " instances checked, " << mismatches << " mismatches\n";
    if (first) {
      const auto [m, n] = cases[*first];
      ctx.out << "first mismatch: " << set_name(m, n) << "\n  criterion: " << format_symmetric(results[*first].first)
              << "\n  oracle:    " << format_symmetric(results[*first].second) << '\n';
    }
  }
  return mismatches == 0 ? kOk : kMismatch;
}

int cmd_partition(const Context& ctx) {
  const int m = require_m(ctx.opt.m);
  const auto [lo, hi] = n_range(ctx.opt);
  if (lo < 1) throw DomainError("n must be positive");
  const auto counts = parallel_map(static_cast<std::size_t>(hi - lo + 1), ctx.opt.threads, [&](std::size_t i) {
    const auto t0 = Clock::now();
    const std::int64_t c = partition_count(m, lo + static_cast<std::int64_t>(i), ctx.budget);
    return std::pair{c, micros_since(t0)};
  });
  for (std::int64_t n = lo; n <= hi; ++n) {
    const auto& [count, micros] = counts[static_cast<std::size_t>(n - lo)];
    if (ctx.opt.json) {
      OutputRecord r;
      r.command = "partition";
      r.m = m;
      r.n = n;
      r.micros = micros;
      r.extra = {{"count", count}};
      ctx.emit(r);
    } else {
      ctx.out << "P_" << m << "(" << n << ") = " << count << '\n';
    }
  }
  return kOk;
}

int cmd_lehmer(const Context& ctx) {
  const int m = require_m(ctx.opt.m);
  const auto [lo, hi] = n_range(ctx.opt);
  if (lo < 1) throw DomainError("n must be positive");
  const bool single = lo == hi;
  std::int64_t hits = 0;
  for (std::int64_t n = lo; n <= hi; ++n) {
    const auto t0 = Clock::now();
    const bool unique = lehmer_unique(m, n);
    const auto micros = micros_since(t0);
    if (unique) ++hits;
    if (!unique && !single) continue;
    if (ctx.opt.json) {
      OutputRecord r;
      r.command = "lehmer";
      r.m = m;
      r.n = n;
      r.micros = micros;
      r.extra = {{"unique", unique}};
      ctx.emit(r);
    } else if (single) {
      ctx.out << "P_" << m << "(" << n << ") = 1: " << yes_no(unique) << '\n';
    } else {
      ctx.out << n << '\n';
    }
  }
  if (!ctx.opt.json && !single) {
    ctx.out << hits << " n in [" << lo << ", " << hi << "] with P_" << m << "(n) = 1\n";
  }
  return kOk;
}

std::string format_coeffs(const std::vector<std::int64_t>& c) {
  std::string s = "(";
  for (std::size_t i = 0; i < c.size(); ++i) s += (i ? "," : "") + std::to_string(c[i]);
  return s + ")";
}

int cmd_linset(const Context& ctx) {
  const LinearForm form = normalize(require_coeffs(ctx.opt));
  const std::int64_t n = require_int(ctx.opt.n, "-n");
  const auto start = Clock::now();
  const LinearSumSet s = full_set(form, n, ctx.budget);
  const auto micros = micros_since(start);
  if (ctx.opt.json) {
    OutputRecord r;
    r.command = "linset";
    r.m = form.m();
    r.n = n;
    r.coeffs = form.coeffs;
    r.values = s.values;
    r.t_star = s.t_max;
    r.method = std::string(to_string(s.method));
    r.micros = micros;
    r.extra = {{"a", form.a}};
    ctx.emit(r);
    return kOk;
  }
  ctx.out << "S_A(" << n << ") = " << (s.values.empty() ? "∅" : "{" + format_symmetric(s.values) + "}") << '\n';
  ctx.out << "A = " << format_coeffs(form.coeffs) << ", a = " << form.a << ", max = "
          << (s.t_max ? std::to_string(*s.t_max) : "none") << ", method = " << to_string(s.method) << '\n';
  return kOk;
}

int cmd_pow4(const Context& ctx) {
  const LinearForm form = normalize(require_coeffs(ctx.opt));
  const auto [lo, hi] = n_range(ctx.opt);
  if (lo < 1) throw DomainError("n must be positive");
  const auto ts = parallel_map(static_cast<std::size_t>(hi - lo + 1), ctx.opt.threads, [&](std::size_t i) {
    const auto t0 = Clock::now();
    const auto t = min_power_of_four(form, lo + static_cast<std::int64_t>(i), 20, ctx.budget);
    return std::pair{t, micros_since(t0)};
  });
  std::optional<std::int64_t> missing;
  int max_t = 0;
  for (std::int64_t n = lo; n <= hi; ++n) {
    const auto& [t, micros] = ts[static_cast<std::size_t>(n - lo)];
    if (!t && !missing) missing = n;
    if (t) max_t = std::max(max_t, *t);
    if (ctx.opt.json) {
      OutputRecord r;
      r.command = "pow4";
      r.m = form.m();
      r.n = n;
      r.coeffs = form.coeffs;
      r.member = t.has_value();
      if (t) r.T = std::int64_t{1} << (2 * *t);
      r.micros = micros;
      r.extra = {{"t", t ? nlohmann::json(*t) : nlohmann::json(nullptr)}};
      ctx.emit(r);
    } else {
      ctx.out << n << ' ' << (t ? "4^" + std::to_string(*t) : "none") << '\n';
    }
  }
  if (missing) {
    ctx.err << "error: no power 4^t with t <= 20 lies in S_A(" << *missing << ") for A = " << format_coeffs(form.coeffs)
            << '\n';
    return kMismatch;
  }
  if (!ctx.opt.json) ctx.out << "every n in [" << lo << ", " << hi << "] has a power of 4 (max t = " << max_t << ")\n";
  return kOk;
}

struct Latency {
  double median = 0;
  double max = 0;
};

Latency summarize(std::vector<double> v) {
  if (v.empty()) return {};
  std::sort(v.begin(), v.end());
  return {v[v.size() / 2], v.back()};
}

// Mean over `reps` calls, to stay above clock resolution.
template <class Fn>
double time_ns(Fn&& fn, int reps) {
  const auto t0 = Clock::now();
  for (int i = 0; i < reps; ++i) {
    volatile bool sink = fn();
    (void)sink;
  }
  return nanos_between(t0, Clock::now()) / reps;
}

std::int64_t random_candidate(std::mt19937_64& rng, int m, std::int64_t n) {
  const std::int64_t top = isqrt(checked_mul(m, n));
  std::int64_t t = uniform(rng, 0, top);
  if (((t ^ n) & 1) != 0) t = t > 0 ? t - 1 : t + 1;
  if (t * t >= m * n) t -= 2;
  return std::max<std::int64_t>(t, n & 1);
}

int cmd_bench(const Context& ctx) {
  const int m = require_m(ctx.opt.m);
  if (m > 11) throw UsageError("bench covers the criterion paths, m <= 11");
  const std::int64_t samples = ctx.opt.sample.empty() ? 201 : parse_integer(ctx.opt.sample);
  if (samples < 1) throw UsageError("--sample must be positive");
  std::mt19937_64 rng(static_cast<std::uint64_t>(parse_integer(ctx.opt.seed)));
  constexpr int kReps = 16;

  std::vector<std::vector<std::string>> table = {{"n", "median", "max", "factor median", "factor max"}};
  auto fmt = [](double ns) {
    std::ostringstream s;
    if (ns < 1e3) {
      s << std::fixed << std::setprecision(0) << ns << " ns";
    } else if (ns < 1e6) {
      s << std::fixed << std::setprecision(1) << ns / 1e3 << " us";
    } else {
      s << std::fixed << std::setprecision(1) << ns / 1e6 << " ms";
    }
    return s.str();
  };

  for (std::int64_t magnitude : parse_list(ctx.opt.magnitudes)) {
    if (magnitude < 1) throw DomainError("magnitudes must be positive");
    std::vector<double> lat;
    std::vector<double> fac;
    for (std::int64_t i = 0; i < samples; ++i) {
      const std::int64_t n = magnitude + uniform(rng, 0, magnitude / 1000);
      const std::int64_t t = random_candidate(rng, m, n);
      lat.push_back(time_ns([&] { return contains(m, n, t, ctx.budget); }, kReps));
      if (m == 3 && t * t < 3 * n) {
        const std::int64_t delta = 3 * n - t * t;
        fac.push_back(time_ns([&] { return factorize(delta).factors.size() > 0; }, kReps));
      }
    }
    const Latency l = summarize(lat);
    const Latency f = summarize(fac);
    if (ctx.opt.json) {
      OutputRecord r;
      r.command = "bench";
      r.m = m;
      r.n = magnitude;
      r.method = std::string(to_string(method_for(m, magnitude)));
      r.micros = static_cast<std::int64_t>(l.median / 1e3);
      r.extra = {{"samples", samples}, {"median_ns", l.median}, {"max_ns", l.max}};
      if (!fac.empty()) {
        r.extra["factor_median_ns"] = f.median;
        r.extra["factor_max_ns"] = f.max;
      }
      ctx.emit(r);
    } else {
      table.push_back({std::to_string(magnitude), fmt(l.median), fmt(l.max), fac.empty() ? "-" : fmt(f.median),
                       fac.empty() ? "-" : fmt(f.max)});
    }
  }
  if (!ctx.opt.json) {
    ctx.out << "contains, m = " << m << " (" << to_string(method_for(m, 1'000'000)) << "), " << samples
            << " samples per row\n";
    print_table(ctx.out, table);
  }

  if (m == 3) {
    // Same T population for both paths; the oracle sees a subsample.
    constexpr std::int64_t kN = 100'000'000;
    constexpr std::size_t kOracleSamples = 5;
    std::vector<std::int64_t> ts;
    for (std::int64_t i = 0; i < samples; ++i) ts.push_back(random_candidate(rng, 3, kN));
    std::vector<double> crit;
    for (std::int64_t t : ts) crit.push_back(time_ns([&] { return contains(3, kN, t, ctx.budget); }, 256));
    std::vector<double> slow;
    const std::size_t stride = std::max<std::size_t>(1, ts.size() / kOracleSamples);
    for (std::size_t i = 0; i < ts.size() && slow.size() < kOracleSamples; i += stride) {
      slow.push_back(time_ns([&] { return oracle_contains(3, kN, ts[i], ctx.budget); }, 1));
    }
    const double c = summarize(crit).median;
    const double o = summarize(slow).median;
    const double ratio = o / c;
    if (ctx.opt.json) {
      OutputRecord r;
      r.command = "bench";
      r.m = 3;
      r.n = kN;
      r.method = "separation";
      r.micros = static_cast<std::int64_t>(o / 1e3);
      r.extra = {{"criterion_median_ns", c}, {"oracle_median_ns", o}, {"oracle_samples", slow.size()},
                 {"separation", ratio}};
      ctx.emit(r);
    } else {
      std::ostringstream s;
      s << std::scientific << std::setprecision(2) << ratio;
      ctx.out << "\nseparation at n = 1e8: criterion median " << fmt(c) << ", enumeration oracle median " << fmt(o)
              << " (" << slow.size() << " samples), ratio " << s.str() << '\n';
    }
  }
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options opt;
  CLI::App app("Achievable sums x_1 + ... + x_m over x_1^2 + ... + x_m^2 = n", "sumsq");
  app.require_subcommand(1);
  app.set_version_flag("--version", "sumsq 1.0");

  std::function<int(const Context&)> handler;
  auto sub = [&](const char* name, const char* help, int (*fn)(const Context&)) {
    CLI::App* s = app.add_subcommand(name, help);
    s->add_flag("--json", opt.json, "One JSON record per line");
    s->add_option("--threads", opt.threads, "Worker threads");
    s->add_option("--budget", opt.budget, "Oracle node budget (overrides SUMSQ_BUDGET)");
    s->callback([&handler, fn] { handler = fn; });
    return s;
  };

  auto* set = sub("set", "Print S_m(n), T*, fullness and method", cmd_set);
  set->add_option("-m", opt.m, "Number of squares")->required();
  set->add_option("-n", opt.n, "Target n")->required();

  auto* member = sub("member", "Test T in S_m(n)", cmd_member);
  member->add_option("-m", opt.m, "Number of squares")->required();
  member->add_option("-n", opt.n, "Target n")->required();
  member->add_option("-T", opt.T, "Candidate sum")->required();

  auto* tstar = sub("tstar", "Print T*_m(n)", cmd_tstar);
  tstar->add_option("-m", opt.m, "Number of squares")->required();
  tstar->add_option("-n", opt.n, "Target n")->required();

  auto* table3 = sub("table3", "Diagnostic table for m = 3", cmd_table3);
  table3->add_option("-n", opt.n, "Target n")->required();

  auto* scan = sub("scan-full", "List n in a range with S_m(n) not full", cmd_scan_full);
  scan->add_option("-m", opt.m, "Number of squares")->required();
  scan->add_option("-r", opt.range, "Range lo:hi")->required();

  auto* cross = sub("crosscheck", "Compare criteria with the exhaustive oracle", cmd_crosscheck);
  cross->add_option("-m", opt.m, "Range of m, lo:hi")->required();
  cross->add_option("-n", opt.n, "Range of n, lo:hi")->required();
  cross->add_option("--sample", opt.sample, "Check K random (m, n) pairs instead of all");
  cross->add_option("--seed", opt.seed, "Seed for --sample");

  auto* part = sub("partition", "Count representations P_m(n)", cmd_partition);
  part->add_option("-m", opt.m, "Number of squares")->required();
  part->add_option("-n", opt.n, "Target n");
  part->add_option("-r", opt.range, "Range lo:hi");

  auto* lehmer = sub("lehmer", "Closed-form test for P_m(n) = 1", cmd_lehmer);
  lehmer->add_option("-m", opt.m, "Number of squares")->required();
  lehmer->add_option("-n", opt.n, "Target n");
  lehmer->add_option("-r", opt.range, "Range lo:hi");

  auto* linset = sub("linset", "Print S_{m,A}(n) for a linear form A", cmd_linset);
  linset->add_option("-a", opt.coeffs, "Coefficients c1,c2,...")->required();
  linset->add_option("-n", opt.n, "Target n")->required();

  auto* pow4 = sub("pow4", "Smallest t with 4^t in S_{m,A}(n)", cmd_pow4);
  pow4->add_option("-a", opt.coeffs, "Coefficients c1,c2,...")->required();
  pow4->add_option("-n", opt.n, "Target n");
  pow4->add_option("-r", opt.range, "Range lo:hi");

  auto* bench = sub("bench", "Latency of the criterion paths", cmd_bench);
  bench->add_option("-m", opt.m, "Number of squares")->required();
  bench->add_option("-N", opt.magnitudes, "Magnitudes of n, comma separated");
  bench->add_option("--sample", opt.sample, "Samples per magnitude");
  bench->add_option("--seed", opt.seed, "Sampling seed");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  try {
    const Context ctx{opt, resolve_budget(opt.budget, std::getenv("SUMSQ_BUDGET")), out, err};
    return handler(ctx);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const BudgetExceeded& e) {
    err << "error: budget exceeded: " << e.what() << '\n';
    return kBudget;
  } catch (const OverflowError& e) {
    err << "error: overflow: " << e.what() << '\n';
    return kOverflow;
  }
}

}  // namespace sumsq::cli
