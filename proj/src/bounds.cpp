// Copyright 2026 The advbound Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "advbound/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "json.hpp"

#include "advbound/detail/dinic.hpp"
#include "advbound/error.hpp"

namespace advbound {
namespace {

std::string tag(const char* kind, std::size_t i) { return std::string(kind) + ":" + std::to_string(i); }

class Checker {
 public:
  Checker(const ConflictGraph& g, const BoundCertificate& cert) : g_(g), cert_(cert) {}

  CheckReport run() {
    check_shape();
    const ExactRational zero(0), one(1);
    const ExactRational n_total(static_cast<long long>(g_.total_count));

    std::vector<ExactRational> qa(cert_.q_a.size()), qb(cert_.q_b.size());
    for (std::size_t i = 0; i < qa.size(); ++i) qa[i] = cert_.q_a[i].to_exact();
    for (std::size_t j = 0; j < qb.size(); ++j) qb[j] = cert_.q_b[j].to_exact();

    auto check_q = [&](const std::vector<ExactRational>& q, const char* side) {
      for (std::size_t i = 0; i < q.size(); ++i) {
        if (q[i] < zero) add("q_nonneg", tag(side, i), q[i], zero);
        if (q[i] > one) add("q_le_one", tag(side, i), q[i], one);
      }
    };
    check_q(qa, "a");
    check_q(qb, "b");

    // (M'z)_v = sum of incident edge duals + own vertex dual.
    std::vector<ExactRational> cover_a(qa.size()), cover_b(qb.size());
    ExactRational z_total(0);
    for (std::size_t k = 0; k < g_.edges.size(); ++k) {
      const Edge& e = g_.edges[k];
      const ExactRational sum = qa[e.a] + qb[e.b];
      if (sum > one) add("edge_packing", tag("edge", k), sum, one);
      const ExactRational z = cert_.z_edges[k].to_exact();
      if (z < zero) add("z_nonneg", tag("edge", k), z, zero);
      cover_a[e.a] += z;
      cover_b[e.b] += z;
      z_total += z;
    }
    auto check_cover = [&](const std::vector<Rational>& zv, std::vector<ExactRational>& cover,
                           const std::vector<ExactRational>& q,
                           const std::vector<VertexRef>& verts, const char* side) {
      for (std::size_t i = 0; i < zv.size(); ++i) {
        const ExactRational z = zv[i].to_exact();
        if (z < zero) add("z_nonneg", tag(side, i), z, zero);
        cover[i] += z;
        z_total += z;
        const ExactRational lhs = q[i] * cover[i];
        const ExactRational p = ExactRational(static_cast<long long>(verts[i].count)) / n_total;
        if (lhs < p) add("cover", tag(side, i), lhs, p);
      }
    };
    check_cover(cert_.z_a, cover_a, qa, g_.a_vertices, "a");
    check_cover(cert_.z_b, cover_b, qb, g_.b_vertices, "b");
    const ExactRational p_total =
        ExactRational(static_cast<long long>(g_.mass_a() + g_.mass_b())) / n_total;
    if (z_total > p_total) add("dual_sum", "global", z_total, p_total);

    check_blocks(qa, qb);
    return std::move(report_);
  }

 private:
  void check_shape() const {
    const bool ok = cert_.q_a.size() == g_.a_vertices.size() &&
                    cert_.q_b.size() == g_.b_vertices.size() &&
                    cert_.z_a.size() == g_.a_vertices.size() &&
                    cert_.z_b.size() == g_.b_vertices.size() &&
                    cert_.z_edges.size() == g_.edges.size() &&
                    cert_.block_of_a.size() == g_.a_vertices.size() &&
                    cert_.block_of_b.size() == g_.b_vertices.size();
    if (!ok) fail(ErrorKind::kDimension, "certificate does not match the graph");
  }

  void check_blocks(const std::vector<ExactRational>& qa, const std::vector<ExactRational>& qb) {
    const std::size_t k = cert_.blocks.size();
    std::vector<int> seen_a(qa.size(), 0), seen_b(qb.size(), 0);
    for (std::size_t i = 0; i < k; ++i) {
      const Block& blk = cert_.blocks[i];
      std::uint64_t ma = 0, mb = 0;
      for (auto p : blk.a) {
        if (p >= qa.size()) fail(ErrorKind::kDimension, "block references a missing A vertex");
        ++seen_a[p];
        ma += g_.a_vertices[p].count;
        if (cert_.block_of_a[p] != i) add("block_partition", tag("a", p), cert_.block_of_a[p], i);
      }
      for (auto p : blk.b) {
        if (p >= qb.size()) fail(ErrorKind::kDimension, "block references a missing B vertex");
        ++seen_b[p];
        mb += g_.b_vertices[p].count;
        if (cert_.block_of_b[p] != i) add("block_partition", tag("b", p), cert_.block_of_b[p], i);
      }
      const std::string where = tag("block", i);
      if (ma != blk.mass_a) add("block_mass", where, blk.mass_a, ma);
      if (mb != blk.mass_b) add("block_mass", where, blk.mass_b, mb);
      if (ma + mb == 0) {
        add("block_mass", where, 0, 1);
        continue;
      }
      const ExactRational ratio = blk.ratio.to_exact();
      const ExactRational expected(static_cast<long long>(ma), static_cast<long long>(ma + mb));
      if (ratio != expected) add("block_ratio", where, ratio, expected);
      for (auto p : blk.a) {
        if (qa[p] != expected) add("block_q", tag("a", p), qa[p], expected);
      }
      for (auto p : blk.b) {
        if (qb[p] != 1 - expected) add("block_q", tag("b", p), qb[p], 1 - expected);
      }
      if (i > 0 && cert_.blocks[i - 1].ratio.to_exact() > ratio) {
        add("block_order", where, cert_.blocks[i - 1].ratio.to_exact(), ratio);
      }
    }
    for (std::size_t p = 0; p < seen_a.size(); ++p) {
      if (seen_a[p] != 1) add("block_partition", tag("a", p), seen_a[p], 1);
    }
    for (std::size_t p = 0; p < seen_b.size(); ++p) {
      if (seen_b[p] != 1) add("block_partition", tag("b", p), seen_b[p], 1);
    }
    for (std::size_t e = 0; e < g_.edges.size(); ++e) {
      const auto ba = cert_.block_of_a[g_.edges[e].a];
      const auto bb = cert_.block_of_b[g_.edges[e].b];
      if (ba > bb) add("edge_direction", tag("edge", e), ba, bb);
    }
  }

  template <typename L, typename R>
  void add(const char* condition, std::string element, const L& lhs, const R& rhs) {
    report_.violations.push_back(
        {condition, std::move(element), ExactRational(lhs), ExactRational(rhs)});
  }

  const ConflictGraph& g_;
  const BoundCertificate& cert_;
  CheckReport report_;
};

}  // namespace

CheckReport verify_certificate(const ConflictGraph& g, const BoundCertificate& cert) {
  return Checker(g, cert).run();
}

std::string report_to_json(const CheckReport& report) {
  nlohmann::json violations = nlohmann::json::array();
  for (const auto& v : report.violations) {
    violations.push_back({{"condition", v.condition},
                          {"element", v.element},
                          {"lhs", v.lhs.str()},
                          {"rhs", v.rhs.str()}});
  }
  nlohmann::json j;
  j["passed"] = report.passed();
  j["violations"] = std::move(violations);
  return j.dump();
}

double cross_entropy_value(const BoundCertificate& cert, const ConflictGraph& g) {
  if (cert.q_a.size() != g.a_vertices.size() || cert.q_b.size() != g.b_vertices.size()) {
    fail(ErrorKind::kDimension, "certificate does not match the graph");
  }
  double acc = 0.0;
  auto add = [&](const Rational& q, std::uint32_t count) {
    if (q.is_zero()) {
      acc = std::numeric_limits<double>::infinity();
      return;
    }
    acc += static_cast<double>(count) *
           std::log(static_cast<double>(q.den()) / static_cast<double>(q.num()));
  };
  for (std::size_t i = 0; i < g.a_vertices.size(); ++i) add(cert.q_a[i], g.a_vertices[i].count);
  for (std::size_t j = 0; j < g.b_vertices.size(); ++j) add(cert.q_b[j], g.b_vertices[j].count);
  return acc / static_cast<double>(g.total_count);
}

ZeroOneBound zero_one_bound(const BoundCertificate& cert, const ConflictGraph& g) {
  if (cert.q_a.size() != g.a_vertices.size() || cert.q_b.size() != g.b_vertices.size()) {
    fail(ErrorKind::kDimension, "certificate does not match the graph");
  }
  ZeroOneBound out;
  std::uint64_t correct = 0;
  // Compare q with 1/2 as 2 num vs den.
  auto half_cmp = [](const Rational& q) {
    return static_cast<int128>(2) * q.num() <=> static_cast<int128>(q.den());
  };
  out.correct_a.resize(g.a_vertices.size());
  for (std::size_t i = 0; i < g.a_vertices.size(); ++i) {
    out.correct_a[i] = half_cmp(cert.q_a[i]) >= 0;
    if (out.correct_a[i]) correct += g.a_vertices[i].count;
  }
  out.correct_b.resize(g.b_vertices.size());
  for (std::size_t j = 0; j < g.b_vertices.size(); ++j) {
    out.correct_b[j] = half_cmp(cert.q_b[j]) > 0;
    if (out.correct_b[j]) correct += g.b_vertices[j].count;
  }
  out.loss = Rational(static_cast<int128>(g.total_count - correct), static_cast<int128>(g.total_count));
  return out;
}

FrankWolfeResult frank_wolfe_reference(const ConflictGraph& g, const FrankWolfeOptions& options) {
  g.validate();
  const std::size_t na = g.a_vertices.size();
  const std::size_t nb = g.b_vertices.size();
  const std::size_t nv = na + nb;
  if (nv == 0) fail(ErrorKind::kEmptyDataset, "graph has no vertices");
  const auto n_total = static_cast<double>(g.total_count);

  std::vector<double> p(nv), q(nv, 0.5), weight(nv), dir(nv);
  for (std::size_t i = 0; i < na; ++i) p[i] = g.a_vertices[i].count / n_total;
  for (std::size_t j = 0; j < nb; ++j) p[na + j] = g.b_vertices[j].count / n_total;

  // Fixed topology: source -> a, b -> sink, a -> b per edge.
  const auto n_nodes = static_cast<std::uint32_t>(nv + 2);
  const std::uint32_t sink = n_nodes - 1;
  std::vector<std::uint32_t> from, to;
  for (std::uint32_t i = 0; i < na; ++i) from.push_back(0), to.push_back(1 + i);
  for (std::uint32_t j = 0; j < nb; ++j) {
    from.push_back(static_cast<std::uint32_t>(1 + na + j));
    to.push_back(sink);
  }
  for (const auto& e : g.edges) {
    from.push_back(1 + e.a);
    to.push_back(static_cast<std::uint32_t>(1 + na + e.b));
  }
  std::vector<double> cap(from.size());

  // q is kept as a convex combination of independent-set indicators (atoms).
  // The start q = 1/2 is half the all-A set plus half the all-B set.
  std::vector<std::vector<char>> atoms;
  std::vector<double> alpha;
  {
    std::vector<char> all_a(nv, 0), all_b(nv, 0);
    std::fill(all_a.begin(), all_a.begin() + static_cast<std::ptrdiff_t>(na), 1);
    std::fill(all_b.begin() + static_cast<std::ptrdiff_t>(na), all_b.end(), 1);
    if (na > 0) atoms.push_back(std::move(all_a)), alpha.push_back(0.5);
    if (nb > 0) atoms.push_back(std::move(all_b)), alpha.push_back(0.5);
    if (atoms.size() == 1) atoms.push_back(std::vector<char>(nv, 0)), alpha.push_back(0.5);
  }
  auto score = [&](const std::vector<char>& atom) {
    double acc = 0.0;
    for (std::size_t v = 0; v < nv; ++v) acc += atom[v] ? weight[v] : 0.0;
    return acc;
  };

  auto objective = [&](const std::vector<double>& x) {
    double acc = 0.0;
    for (std::size_t v = 0; v < nv; ++v) acc -= p[v] * std::log(x[v]);
    return acc;
  };

  FrankWolfeResult out;
  out.gap = std::numeric_limits<double>::infinity();
  std::vector<char> s(nv);
  for (std::size_t iter = 0; iter < options.max_iters; ++iter) {
    if (options.stop.stop_requested()) break;
    double total_weight = 0.0;
    for (std::size_t v = 0; v < nv; ++v) {
      weight[v] = p[v] / q[v];  // minus the gradient
      total_weight += weight[v];
    }
    for (std::size_t v = 0; v < nv; ++v) cap[v] = weight[v];
    std::fill(cap.begin() + static_cast<std::ptrdiff_t>(nv), cap.end(), 2.0 * total_weight + 1.0);
    detail::Dinic<double> dinic(n_nodes, from, to, cap);
    const double tol = 1e-13 * total_weight;
    dinic.solve(0, sink, tol);
    const auto reach = dinic.reachable_from(0, tol);
    // Independent set: reachable A vertices and unreachable B vertices.
    for (std::size_t i = 0; i < na; ++i) s[i] = reach[1 + i] ? 1 : 0;
    for (std::size_t j = 0; j < nb; ++j) s[na + j] = reach[1 + na + j] ? 0 : 1;

    double q_score = 0.0;
    for (std::size_t v = 0; v < nv; ++v) q_score += weight[v] * q[v];
    const double gap = score(s) - q_score;
    out.gap = gap;
    out.iterations = iter;
    if (gap <= options.gap_tol) {
      out.converged = true;
      break;
    }

    // Away atom: the active atom least aligned with the descent direction.
    std::size_t away = 0;
    double away_score = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < atoms.size(); ++k) {
      const double sc = score(atoms[k]);
      if (sc < away_score) away_score = sc, away = k;
    }
    const bool toward = gap >= q_score - away_score;
    double max_step = 1.0;
    if (toward) {
      for (std::size_t v = 0; v < nv; ++v) dir[v] = s[v] - q[v];
    } else {
      for (std::size_t v = 0; v < nv; ++v) dir[v] = q[v] - atoms[away][v];
      max_step = alpha[away] / (1.0 - alpha[away]);
    }

    // Exact line search: the restriction to the segment is convex, so bisect
    // on the sign of its derivative, which is +inf where some q_v hits 0.
    auto slope = [&](double step) {
      double acc = 0.0;
      for (std::size_t v = 0; v < nv; ++v) {
        const double x = q[v] + step * dir[v];
        if (x <= 0.0) return std::numeric_limits<double>::infinity();  // rounding past zero
        acc -= p[v] * dir[v] / x;
      }
      return acc;
    };
    double step = max_step;
    if (!(slope(max_step) <= 0.0)) {
      double lo = 0.0, hi = max_step;
      while (hi - lo > options.line_search_tol * max_step) {
        const double mid = 0.5 * (lo + hi);
        (slope(mid) < 0.0 ? lo : hi) = mid;
      }
      step = lo;
    }
    for (std::size_t v = 0; v < nv; ++v) q[v] += step * dir[v];

    if (toward) {
      for (auto& a : alpha) a *= 1.0 - step;
      const auto it = std::find(atoms.begin(), atoms.end(), s);
      if (it == atoms.end()) {
        atoms.push_back(s);
        alpha.push_back(step);
      } else {
        alpha[static_cast<std::size_t>(it - atoms.begin())] += step;
      }
      if (step == 1.0) {
        atoms.assign(1, s);
        alpha.assign(1, 1.0);
      }
    } else {
      for (auto& a : alpha) a *= 1.0 + step;
      alpha[away] -= step;
      if (step == max_step) {  // drop step
        atoms.erase(atoms.begin() + static_cast<std::ptrdiff_t>(away));
        alpha.erase(alpha.begin() + static_cast<std::ptrdiff_t>(away));
      }
    }
    out.iterations = iter + 1;
  }
  out.objective = objective(q);
  out.q_a.assign(q.begin(), q.begin() + static_cast<std::ptrdiff_t>(na));
  out.q_b.assign(q.begin() + static_cast<std::ptrdiff_t>(na), q.end());
  return out;
}

}  // namespace advbound
