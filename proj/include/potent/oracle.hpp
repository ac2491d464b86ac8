#pragma once

#include <chrono>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "potent/decompose.hpp"

namespace potent {

// All p-potent n x n matrices over the field, in lexicographic entry order.
// Guarded: refuses candidate spaces beyond the cap.
inline std::vector<Matrix> enumerate_p_potents(const Field& f, uint32_t n,
                                               uint64_t guard = 100000000) {
  std::vector<Matrix> out;
  for_each_matrix(f, n, n, guard, [&](const Matrix& m) {
    if (is_p_potent(m)) out.push_back(m);
    return false;
  });
  return out;
}

// First-fit reference search: the lexicographically least p-potent E with
// (A - E) nilpotent of index at most max_index, independent of the
// constructive machinery. nullopt means no such split exists at all.
inline std::optional<std::pair<Matrix, Matrix>> oracle_decompose(
    const Matrix& a, uint32_t max_index, uint64_t guard = 100000000) {
  if (!a.is_square() || a.rows() == 0)
    throw DimensionMismatch("oracle_decompose requires a nonempty square matrix");
  return detail::oracle_search(a, max_index, guard);
}

// One scanned companion in the sharpness study.
struct SharpnessCase {
  std::vector<std::string> coeffs;  // canonical element strings (c_0, ..., c_{n-1})
  bool smaller_index_impossible;    // no split with V^2 = 0 exists
  Decomposition certificate;        // verified split with V^3 = 0
};

struct SharpnessReport {
  std::vector<SharpnessCase> cases;
  bool all_sharp = false;  // every qualifier refuses index 2 and admits index 3
};

// Fixed study over F_3, size 3, trace 1: scan the companions whose
// characteristic polynomial does not vanish at 0, 1, -1, show none of them
// splits with a square-zero nilpotent part, and certify the cube-zero split.
inline SharpnessReport sharpness_scan() {
  Field f = FieldSpec::prime(3);
  SharpnessReport report;
  report.all_sharp = true;

  // c_2 = -trace is fixed at 2; c_0 and c_1 range over the field.
  for (int64_t c0 = 0; c0 < 3; ++c0)
    for (int64_t c1 = 0; c1 < 3; ++c1) {
      CompanionSpec c = CompanionSpec::from_ints(f, {c0, c1, 2});
      Polynomial chi = c.char_polynomial();
      bool qualifies = true;
      for (int64_t x : {0, 1, -1})
        if (chi.eval(int_embed(f, x)).is_zero()) qualifies = false;
      if (!qualifies) continue;

      Matrix cm = c.realize();
      bool no_index2 = !oracle_decompose(cm, 2).has_value();
      Decomposition cert = decompose_companion(c);
      bool index3_ok = verify_decomposition(cert) && cert.checks.nil_index == 3;

      std::vector<std::string> coeffs;
      for (const auto& e : c.coeffs()) coeffs.push_back(to_string(e));
      report.cases.push_back(SharpnessCase{std::move(coeffs), no_index2, cert});
      if (!no_index2 || !index3_ok) report.all_sharp = false;
    }
  return report;
}

struct SweepReport {
  uint64_t total = 0;
  uint64_t succeeded = 0;
  uint64_t trace_rejected = 0;
  uint64_t failed = 0;
  std::map<RouteTag, uint64_t> histogram;
  std::vector<std::string> failure_examples;  // capped
  uint64_t elapsed_ms = 0;
};

namespace detail {

inline void merge_into(SweepReport& into, const SweepReport& part) {
  into.total += part.total;
  into.succeeded += part.succeeded;
  into.trace_rejected += part.trace_rejected;
  into.failed += part.failed;
  for (const auto& [tag, count] : part.histogram) into.histogram[tag] += count;
  for (const auto& s : part.failure_examples)
    if (into.failure_examples.size() < 32) into.failure_examples.push_back(s);
}

inline std::string coeffs_str(const CompanionSpec& c) {
  std::string s = "(";
  for (uint32_t i = 0; i < c.size(); ++i) {
    if (i) s += ",";
    s += to_string(c.coeffs()[i]);
  }
  return s + ")";
}

inline SweepReport sweep_range(const Field& f, uint32_t n, uint64_t lo, uint64_t hi) {
  SweepReport part;
  uint64_t q = f->order();
  for (uint64_t idx = lo; idx < hi; ++idx) {
    // Decode idx into the coefficient tuple (c_0 most significant).
    std::vector<FieldElement> coeffs(n, FieldElement::zero(f));
    uint64_t rest = idx;
    for (uint32_t i = n; i-- > 0;) {
      coeffs[i] = FieldElement::from_lex_index(f, rest % q);
      rest /= q;
    }
    CompanionSpec c(f, std::move(coeffs));
    ++part.total;
    try {
      Decomposition d = decompose_companion(c);
      if (!verify_decomposition(d)) throw InternalError("re-verification failed");
      ++part.succeeded;
      ++part.histogram[d.route.tag];
    } catch (const TraceNotPrimeSubfield&) {
      ++part.trace_rejected;
    } catch (const Error& e) {
      ++part.failed;
      if (part.failure_examples.size() < 32)
        part.failure_examples.push_back(coeffs_str(c) + " " + e.what());
    }
  }
  return part;
}

}  // namespace detail

// Decomposes every size-n companion over the field (q^n of them), tallying
// routes and failures. The index space is split into contiguous chunks, one
// worker thread per chunk. Guard: q^n must stay within the cap.
inline SweepReport exhaustive_sweep(const Field& f, uint32_t n, uint32_t threads = 1,
                                    uint64_t guard = 1000000) {
  if (n == 0) throw PreconditionViolated("sweep needs n >= 1");
  uint64_t q = f->order();
  uint64_t total = 1;
  for (uint32_t i = 0; i < n; ++i) {
    if (total > guard / q)
      throw SearchSpaceTooLarge("sweep of q^n companions exceeds the cap of " +
                                std::to_string(guard));
    total *= q;
  }
  if (threads == 0) threads = 1;
  if (threads > total) threads = static_cast<uint32_t>(total);

  auto start = std::chrono::steady_clock::now();
  std::vector<SweepReport> parts(threads);
  if (threads == 1) {
    parts[0] = detail::sweep_range(f, n, 0, total);
  } else {
    std::vector<std::thread> pool;
    uint64_t chunk = total / threads;
    uint64_t extra = total % threads;
    uint64_t lo = 0;
    for (uint32_t i = 0; i < threads; ++i) {
      uint64_t hi = lo + chunk + (i < extra ? 1 : 0);
      pool.emplace_back([&parts, &f, n, lo, hi, i] {
        parts[i] = detail::sweep_range(f, n, lo, hi);
      });
      lo = hi;
    }
    for (auto& th : pool) th.join();
  }

  SweepReport report;
  for (const auto& part : parts) detail::merge_into(report, part);
  report.elapsed_ms = static_cast<uint64_t>(
      std::chrono::duration_cast<std::chrono::milliseconds>(
          std::chrono::steady_clock::now() - start)
          .count());
  return report;
}

}  // namespace potent
