#include "spyswap/lps_expander.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <deque>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <string>
#include <tuple>
#include <unordered_map>

#include "spyswap/error.hpp"

namespace spyswap {

namespace {

using u64 = std::uint64_t;
using u128 = unsigned __int128;

u64 mul_mod(u64 a, u64 b, u64 m) { return static_cast<u64>(static_cast<u128>(a) * b % m); }

u64 pow_mod(u64 base, u64 exp, u64 m) {
  u64 result = 1 % m;
  base %= m;
  while (exp) {
    if (exp & 1) result = mul_mod(result, base, m);
    base = mul_mod(base, base, m);
    exp >>= 1;
  }
  return result;
}

u64 reduce(std::int64_t a, u64 q) {
  const auto m = static_cast<std::int64_t>(q);
  return static_cast<u64>(((a % m) + m) % m);
}

u64 inverse_mod(u64 a, u64 q) { return pow_mod(a, q - 2, q); }

using Mat = std::array<u64, 4>;  // row-major [[0,1],[2,3]]

Mat mat_mul(const Mat& x, const Mat& y, u64 q) {
  return {(x[0] * y[0] + x[1] * y[2]) % q, (x[0] * y[1] + x[1] * y[3]) % q,
          (x[2] * y[0] + x[3] * y[2]) % q, (x[2] * y[1] + x[3] * y[3]) % q};
}

// Representative of the scalar class: first nonzero of the top row scaled to 1.
Mat canonical(Mat x, u64 q) {
  const u64 lead = x[0] != 0 ? x[0] : x[1];
  const u64 inv = inverse_mod(lead, q);
  for (auto& e : x) e = e * inv % q;
  return x;
}

u64 key_of(const Mat& x, u64 q) { return ((x[0] * q + x[1]) * q + x[2]) * q + x[3]; }

}  // namespace

RegularGraph::RegularGraph(std::size_t n_vertices, std::size_t degree, std::vector<Edge> edges)
    : n_(n_vertices), degree_(degree), edges_(std::move(edges)), adj_(n_vertices) {
  if (n_ == 0) throw InvalidInput("graph needs at least one vertex");
  for (const auto& e : edges_) {
    if (e.u >= n_ || e.v >= n_) {
      throw InvalidInput("edge (" + std::to_string(e.u) + "," + std::to_string(e.v) +
                         ") out of range for n=" + std::to_string(n_));
    }
    adj_[e.u].push_back(e.v);
    adj_[e.v].push_back(e.u);
  }
  for (std::size_t v = 0; v < n_; ++v) {
    if (adj_[v].size() != degree_) {
      throw InvalidInput("vertex " + std::to_string(v) + " has degree " +
                         std::to_string(adj_[v].size()) + ", expected " + std::to_string(degree_));
    }
  }
  // 2-colouring per component.
  sides_.assign(n_, -1);
  bipartite_ = true;
  std::deque<std::uint32_t> queue;
  for (std::uint32_t s = 0; s < n_ && bipartite_; ++s) {
    if (sides_[s] >= 0) continue;
    sides_[s] = 0;
    queue.push_back(s);
    while (!queue.empty() && bipartite_) {
      const auto x = queue.front();
      queue.pop_front();
      for (auto y : adj_[x]) {
        if (sides_[y] < 0) {
          sides_[y] = static_cast<std::int8_t>(1 - sides_[x]);
          queue.push_back(y);
        } else if (sides_[y] == sides_[x]) {
          bipartite_ = false;
          break;
        }
      }
    }
  }
  if (!bipartite_) sides_.clear();
}

bool is_prime(std::uint64_t x) {
  if (x < 2) return false;
  for (u64 small : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
    if (x % small == 0) return x == small;
  }
  u64 d = x - 1;
  unsigned s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  // Deterministic witness set for 64-bit inputs.
  for (u64 a : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
    u64 y = pow_mod(a, d, x);
    if (y == 1 || y == x - 1) continue;
    bool composite = true;
    for (unsigned r = 1; r < s; ++r) {
      y = mul_mod(y, y, x);
      if (y == x - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

int legendre(std::int64_t a, std::uint64_t q) {
  if (q < 3 || !is_prime(q)) throw InvalidInput("legendre: " + std::to_string(q) + " is not an odd prime");
  const u64 r = reduce(a, q);
  if (r == 0) return 0;
  return pow_mod(r, (q - 1) / 2, q) == 1 ? 1 : -1;
}

LpsParams LpsParams::make(std::uint64_t p, std::uint64_t q) {
  if (!is_prime(p) || p % 4 != 1) throw InvalidInput("p=" + std::to_string(p) + " must be a prime = 1 mod 4");
  if (!is_prime(q) || q % 4 != 1) throw InvalidInput("q=" + std::to_string(q) + " must be a prime = 1 mod 4");
  if (p == q) throw InvalidInput("p and q must differ");
  LpsParams lp;
  lp.p = p;
  lp.q = q;
  lp.residue_case = legendre(static_cast<std::int64_t>(p), q) == 1;
  return lp;
}

std::vector<std::array<std::int64_t, 4>> lps_generators(std::uint64_t p) {
  if (p % 4 != 1) throw InvalidInput("lps_generators: p must be 1 mod 4");
  const auto ip = static_cast<std::int64_t>(p);
  const auto root = static_cast<std::int64_t>(std::sqrt(static_cast<double>(p))) + 1;
  const std::int64_t even_root = root - (root & 1);
  auto isqrt = [](std::int64_t v) {
    auto s = static_cast<std::int64_t>(std::sqrt(static_cast<double>(v)));
    while (s * s > v) --s;
    while ((s + 1) * (s + 1) <= v) ++s;
    return s;
  };
  std::vector<std::array<std::int64_t, 4>> out;
  for (std::int64_t a0 = 1; a0 * a0 <= ip; a0 += 2) {
    for (std::int64_t a1 = -even_root; a1 <= even_root; a1 += 2) {
      const std::int64_t r1 = ip - a0 * a0 - a1 * a1;
      if (r1 < 0) continue;
      for (std::int64_t a2 = -even_root; a2 <= even_root; a2 += 2) {
        const std::int64_t r2 = r1 - a2 * a2;
        if (r2 < 0) continue;
        const std::int64_t a3 = isqrt(r2);
        if (a3 * a3 != r2 || a3 % 2 != 0) continue;
        out.push_back({a0, a1, a2, a3});
        if (a3 != 0) out.push_back({a0, a1, a2, -a3});
      }
    }
  }
  std::sort(out.begin(), out.end());
  if (out.size() != p + 1) {
    throw InvariantViolation("expected p+1=" + std::to_string(p + 1) + " generators, found " +
                             std::to_string(out.size()));
  }
  return out;
}

RegularGraph lps_construct(const LpsParams& params, const LpsOptions& options) {
  const u64 q = params.q;
  const u64 expected = params.vertex_count();
  const u64 degree = params.p + 1;
  if (expected * degree > options.max_arcs) {
    throw CapabilityError("LPS(" + std::to_string(params.p) + "," + std::to_string(q) + ") needs " +
                          std::to_string(expected * degree) + " arcs, limit " +
                          std::to_string(options.max_arcs));
  }
  u64 iq = 0;  // smallest square root of -1
  for (u64 x = 1; x < q; ++x) {
    if (x * x % q == q - 1) {
      iq = x;
      break;
    }
  }
  const auto quats = lps_generators(params.p);
  std::vector<Mat> gens;
  gens.reserve(quats.size());
  for (const auto& a : quats) {
    const u64 a0 = reduce(a[0], q), a1 = reduce(a[1], q), a2 = reduce(a[2], q), a3 = reduce(a[3], q);
    const u64 ia1 = a1 * iq % q, ia3 = a3 * iq % q;
    gens.push_back({(a0 + ia1) % q, (a2 + ia3) % q, (q - a2 + ia3) % q, (a0 + q - ia1) % q});
  }
  // Conjugate quaternion = inverse up to the scalar p.
  std::vector<std::size_t> inv(quats.size());
  for (std::size_t j = 0; j < quats.size(); ++j) {
    const std::array<std::int64_t, 4> conj{quats[j][0], -quats[j][1], -quats[j][2], -quats[j][3]};
    inv[j] = static_cast<std::size_t>(std::lower_bound(quats.begin(), quats.end(), conj) - quats.begin());
  }

  std::unordered_map<u64, std::uint32_t> index;
  index.reserve(static_cast<std::size_t>(expected * 2));
  std::vector<Mat> vertices;
  vertices.reserve(static_cast<std::size_t>(expected));
  const Mat id{1, 0, 0, 1};
  vertices.push_back(id);
  index.emplace(key_of(id, q), 0);
  std::vector<std::uint32_t> nbr;
  nbr.reserve(static_cast<std::size_t>(expected * degree));
  for (std::size_t v = 0; v < vertices.size(); ++v) {
    for (const auto& s : gens) {
      const Mat y = canonical(mat_mul(vertices[v], s, q), q);
      const auto [it, fresh] = index.try_emplace(key_of(y, q), static_cast<std::uint32_t>(vertices.size()));
      if (fresh) {
        if (vertices.size() >= expected) {
          throw InvariantViolation("LPS exploration exceeded the expected vertex count");
        }
        vertices.push_back(y);
      }
      nbr.push_back(it->second);
    }
  }
  if (vertices.size() != expected) {
    throw InvariantViolation("LPS(" + std::to_string(params.p) + "," + std::to_string(q) +
                             ") generated " + std::to_string(vertices.size()) + " vertices, expected " +
                             std::to_string(expected));
  }
  std::vector<Edge> edges;
  edges.reserve(static_cast<std::size_t>(expected * degree / 2));
  for (std::size_t v = 0; v < vertices.size(); ++v) {
    for (std::size_t j = 0; j < degree; ++j) {
      const std::uint32_t w = nbr[v * degree + j];
      if (nbr[w * degree + inv[j]] != v) throw InvariantViolation("LPS arcs do not pair up");
      if (std::pair<std::size_t, std::size_t>(v, j) < std::pair<std::size_t, std::size_t>(w, inv[j])) {
        edges.push_back({static_cast<std::uint32_t>(v), w});
      }
    }
  }
  return RegularGraph(vertices.size(), degree, std::move(edges));
}

namespace {

Eigen::VectorXd adjacency_times(const RegularGraph& g, const Eigen::VectorXd& x) {
  Eigen::VectorXd y = Eigen::VectorXd::Zero(x.size());
  const auto& adj = g.adjacency();
  for (std::size_t v = 0; v < adj.size(); ++v) {
    double s = 0.0;
    for (auto w : adj[v]) s += x[w];
    y[static_cast<Eigen::Index>(v)] = s;
  }
  return y;
}

}  // namespace

SpectralCertificate spectral_check(const RegularGraph& g, double p, const SpectralOptions& options) {
  const std::size_t n = g.n_vertices();
  SpectralCertificate cert;
  cert.ramanujan_bound = 2.0 * std::sqrt(p);
  if (n <= options.dense_limit) {
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    for (const auto& e : g.edges()) {
      if (e.u == e.v) {
        a(e.u, e.u) += 2.0;
      } else {
        a(e.u, e.v) += 1.0;
        a(e.v, e.u) += 1.0;
      }
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(a, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) throw InvariantViolation("eigensolver did not converge");
    const Eigen::VectorXd& ev = solver.eigenvalues();  // ascending
    Eigen::Index lo = 0;
    Eigen::Index hi = ev.size() - 1;
    --hi;  // the trivial eigenvalue `degree`
    if (g.bipartite()) ++lo;  // and -degree
    double worst = 0.0;
    for (Eigen::Index i = lo; i <= hi; ++i) worst = std::max(worst, std::abs(ev[i]));
    cert.second_eigenvalue = worst;
    cert.method = SpectralMethod::dense;
    cert.within_bound = worst <= cert.ramanujan_bound + 1e-6;
    cert.verified = cert.within_bound;
    return cert;
  }
  if (!options.allow_estimate) {
    throw CapabilityError("graph with " + std::to_string(n) + " vertices exceeds the dense limit " +
                          std::to_string(options.dense_limit));
  }
  const auto nn = static_cast<Eigen::Index>(n);
  const Eigen::VectorXd ones = Eigen::VectorXd::Constant(nn, 1.0 / std::sqrt(static_cast<double>(n)));
  Eigen::VectorXd signs;
  if (g.bipartite()) {
    signs.resize(nn);
    for (Eigen::Index i = 0; i < nn; ++i) signs[i] = g.sides()[static_cast<std::size_t>(i)] ? -1.0 : 1.0;
    signs /= std::sqrt(static_cast<double>(n));
  }
  auto deflate = [&](Eigen::VectorXd& x) {
    x -= ones.dot(x) * ones;
    if (signs.size()) x -= signs.dot(x) * signs;
  };
  CounterRng rng(options.seed);
  double best = 0.0;
  for (std::size_t s = 0; s < options.power_starts; ++s) {
    Eigen::VectorXd x(nn);
    for (Eigen::Index i = 0; i < nn; ++i) x[i] = rng.uniform01() - 0.5;
    deflate(x);
    x.normalize();
    double estimate = 0.0;
    for (std::size_t it = 0; it < options.power_iterations; ++it) {
      Eigen::VectorXd y = adjacency_times(g, x);
      deflate(y);
      estimate = y.norm();
      if (estimate == 0.0) break;
      x = y / estimate;
    }
    best = std::max(best, estimate);
  }
  cert.second_eigenvalue = best;
  cert.method = SpectralMethod::power_estimate;
  cert.within_bound = best <= cert.ramanujan_bound + 1e-6;
  cert.verified = false;
  return cert;
}

namespace {

std::vector<std::int8_t> membership(const RegularGraph& g, std::span<const std::uint32_t> v1,
                                    std::span<const std::uint32_t> v2) {
  std::vector<std::int8_t> side(g.n_vertices(), 0);
  for (auto v : v1) {
    if (v >= g.n_vertices()) throw InvalidInput("vertex out of range");
    if (side[v]) throw PreconditionError("vertex sets repeat vertex " + std::to_string(v));
    side[v] = 1;
  }
  for (auto v : v2) {
    if (v >= g.n_vertices()) throw InvalidInput("vertex out of range");
    if (side[v]) throw PreconditionError("vertex sets overlap at " + std::to_string(v));
    side[v] = 2;
  }
  return side;
}

}  // namespace

std::uint64_t count_cross_edges(const RegularGraph& g, std::span<const std::uint32_t> v1,
                                std::span<const std::uint32_t> v2) {
  const auto side = membership(g, v1, v2);
  std::uint64_t count = 0;
  for (const auto& e : g.edges()) {
    if ((side[e.u] == 1 && side[e.v] == 2) || (side[e.u] == 2 && side[e.v] == 1)) ++count;
  }
  return count;
}

bool mixing_check(const RegularGraph& g, std::span<const std::uint32_t> v1,
                  std::span<const std::uint32_t> v2, double p) {
  const auto e = static_cast<double>(count_cross_edges(g, v1, v2));
  const double s1 = static_cast<double>(v1.size());
  const double s2 = static_cast<double>(v2.size());
  const double expected = (p + 1.0) * s1 * s2 / static_cast<double>(g.n_vertices());
  return std::abs(e - expected) <= 2.0 * std::sqrt(p * s1 * s2) + 1e-9;
}

bool edge_density_guarantee(const RegularGraph& g, double p, double x,
                            std::span<const std::uint32_t> v1, std::span<const std::uint32_t> v2) {
  if (!(x > 0.0 && x < 1.0)) throw PreconditionError("x must lie in (0,1)");
  if (p < 16.0 / (x * x)) {
    throw PreconditionError("p=" + std::to_string(p) + " below 16/x^2=" + std::to_string(16.0 / (x * x)));
  }
  const double threshold = x * static_cast<double>(g.n_vertices());
  if (static_cast<double>(v1.size()) < threshold || static_cast<double>(v2.size()) < threshold) {
    throw PreconditionError("vertex sets smaller than x*n=" + std::to_string(threshold));
  }
  const auto e = static_cast<double>(count_cross_edges(g, v1, v2));
  return e >= x * x * static_cast<double>(g.edges().size());
}

RegularGraph random_regular_graph(std::size_t n, std::size_t degree, CounterRng& rng) {
  if (n == 0) throw InvalidInput("random_regular_graph: n must be >= 1");
  if (degree >= n) throw InvalidInput("random_regular_graph: degree must be < n for a simple graph");
  if ((n * degree) % 2 != 0) throw InvalidInput("random_regular_graph: n*degree must be even");
  constexpr std::size_t kMaxRestarts = 1000;
  for (std::size_t restart = 0; restart < kMaxRestarts; ++restart) {
    std::vector<std::uint32_t> points;
    points.reserve(n * degree);
    for (std::uint32_t v = 0; v < n; ++v) points.insert(points.end(), degree, v);
    std::vector<std::vector<std::uint32_t>> adj(n);
    std::vector<Edge> edges;
    edges.reserve(n * degree / 2);
    auto suitable = [&](std::uint32_t a, std::uint32_t b) {
      return a != b && std::find(adj[a].begin(), adj[a].end(), b) == adj[a].end();
    };
    bool stuck = false;
    std::size_t failures = 0;
    while (!points.empty() && !stuck) {
      const std::size_t count = points.size();
      const auto i = static_cast<std::size_t>(rng.bounded(count));
      auto j = static_cast<std::size_t>(rng.bounded(count - 1));
      if (j >= i) ++j;
      const auto a = points[i];
      const auto b = points[j];
      if (suitable(a, b)) {
        adj[a].push_back(b);
        adj[b].push_back(a);
        edges.push_back({std::min(a, b), std::max(a, b)});
        const auto hi = std::max(i, j), lo = std::min(i, j);
        points[hi] = points.back();
        points.pop_back();
        points[lo] = points.back();
        points.pop_back();
        failures = 0;
        continue;
      }
      if (++failures < 64 + 4 * count) continue;
      stuck = true;
      for (std::size_t x = 0; x < count && stuck; ++x) {
        for (std::size_t y = x + 1; y < count; ++y) {
          if (suitable(points[x], points[y])) {
            stuck = false;
            break;
          }
        }
      }
      failures = 0;
    }
    if (!stuck) {
      std::sort(edges.begin(), edges.end(),
                [](const Edge& l, const Edge& r) { return std::tie(l.u, l.v) < std::tie(r.u, r.v); });
      return RegularGraph(n, degree, std::move(edges));
    }
  }
  throw CapabilityError("random_regular_graph: pairing kept getting stuck");
}

LpsParams smallest_lps(std::uint64_t n_needed, std::uint64_t degree_needed) {
  constexpr std::size_t kPrimeCandidates = 16;
  std::uint64_t p = std::max<std::uint64_t>(5, degree_needed > 0 ? degree_needed - 1 : 0);
  std::optional<LpsParams> best;
  std::size_t tried = 0;
  for (; tried < kPrimeCandidates; ++p) {
    if (p % 4 != 1 || !is_prime(p)) continue;
    ++tried;
    for (std::uint64_t q = 5;; q += 4) {
      const std::uint64_t half = q * (q * q - 1) / 2;
      if (best && half >= best->vertex_count()) break;
      if (half > 64 * n_needed + 4096) break;
      if (q == p || !is_prime(q)) continue;
      const auto lp = LpsParams::make(p, q);
      const auto size = lp.vertex_count();
      if (size < n_needed) continue;
      if (!best || size < best->vertex_count()) best = lp;
      break;
    }
  }
  if (!best) {
    throw CapabilityError("no LPS graph with >= " + std::to_string(n_needed) + " vertices and degree >= " +
                          std::to_string(degree_needed) + " in the search range");
  }
  return *best;
}

RegularGraph GraphProvider::operator()(std::size_t n_needed, std::size_t degree_needed) {
  if (n_needed < 2) throw InvalidInput("graph provider: n_needed must be >= 2");
  const std::uint64_t call = calls_++;
  if (options_.mode == GraphMode::strict) {
    auto g = lps_construct(smallest_lps(n_needed, degree_needed), options_.lps);
    return g;
  }
  if (degree_needed > n_needed - 1) {
    throw InvalidInput("graph provider: degree " + std::to_string(degree_needed) + " impossible on " +
                       std::to_string(n_needed) + " vertices");
  }
  for (std::size_t attempt = 0; attempt < options_.max_attempts; ++attempt) {
    auto rng = substream(options_.seed, (call << 16) | attempt);
    auto g = random_regular_graph(n_needed, degree_needed, rng);
    if (degree_needed < 3) return g;  // no spectral gap to certify
    auto spectral = options_.spectral;
    spectral.seed = rng();
    auto cert = spectral_check(g, static_cast<double>(degree_needed - 1), spectral);
    if (cert.second_eigenvalue <= cert.ramanujan_bound * options_.empirical_slack) {
      g.set_certificate(cert);
      return g;
    }
  }
  throw CapabilityError("no random " + std::to_string(degree_needed) + "-regular graph on " +
                        std::to_string(n_needed) + " vertices passed certification");
}

void write_edge_list(std::ostream& out, const RegularGraph& g) {
  out << g.n_vertices() << ' ' << g.degree() << '\n';
  for (const auto& e : g.edges()) out << e.u << ' ' << e.v << '\n';
}

RegularGraph read_edge_list(std::istream& in) {
  std::string line;
  auto next_line = [&]() -> bool {
    while (std::getline(in, line)) {
      if (line.find_first_not_of(" \t\r") != std::string::npos) return true;
    }
    return false;
  };
  if (!next_line()) throw ParseError("edge list: missing header");
  std::size_t n = 0, degree = 0;
  {
    std::istringstream hs(line);
    std::string extra;
    if (!(hs >> n >> degree) || (hs >> extra)) throw ParseError("edge list: bad header '" + line + "'");
  }
  std::vector<Edge> edges;
  while (next_line()) {
    std::istringstream es(line);
    long long u = -1, v = -1;
    std::string extra;
    if (!(es >> u >> v) || (es >> extra) || u < 0 || v < 0) {
      throw ParseError("edge list: bad edge line '" + line + "'");
    }
    edges.push_back({static_cast<std::uint32_t>(u), static_cast<std::uint32_t>(v)});
  }
  try {
    return RegularGraph(n, degree, std::move(edges));
  } catch (const InvalidInput& e) {
    throw ParseError(std::string("edge list: ") + e.what());
  }
}

}  // namespace spyswap
