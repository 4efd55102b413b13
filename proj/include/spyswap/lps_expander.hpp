#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "spyswap/rng.hpp"

namespace spyswap {

struct Edge {
  std::uint32_t u = 0;
  std::uint32_t v = 0;
  friend bool operator==(const Edge&, const Edge&) = default;
};

enum class SpectralMethod { dense, power_estimate };

struct SpectralCertificate {
  // Largest |lambda| over the non-trivial adjacency eigenvalues.
  double second_eigenvalue = 0.0;
  double ramanujan_bound = 0.0;  // 2 sqrt(p)
  SpectralMethod method = SpectralMethod::dense;
  bool within_bound = false;
  // Only a dense eigendecomposition can verify; power estimates never do.
  bool verified = false;
};

// Undirected d-regular multigraph. Loops count two endpoints at their vertex.
class RegularGraph {
 public:
  // Throws InvalidInput on out-of-range endpoints or a non-regular degree sequence.
  RegularGraph(std::size_t n_vertices, std::size_t degree, std::vector<Edge> edges);

  std::size_t n_vertices() const noexcept { return n_; }
  std::size_t degree() const noexcept { return degree_; }
  std::span<const Edge> edges() const noexcept { return edges_; }
  bool bipartite() const noexcept { return bipartite_; }

  // Neighbour lists with multiplicity; a loop appears twice.
  const std::vector<std::vector<std::uint32_t>>& adjacency() const noexcept { return adj_; }

  // 2-colouring when bipartite (empty otherwise).
  const std::vector<std::int8_t>& sides() const noexcept { return sides_; }

  const std::optional<SpectralCertificate>& certificate() const noexcept { return cert_; }
  void set_certificate(SpectralCertificate c) { cert_ = c; }

 private:
  std::size_t n_;
  std::size_t degree_;
  std::vector<Edge> edges_;
  std::vector<std::vector<std::uint32_t>> adj_;
  std::vector<std::int8_t> sides_;
  bool bipartite_ = false;
  std::optional<SpectralCertificate> cert_;
};

bool is_prime(std::uint64_t x);

// Legendre symbol (a/q) for an odd prime q; throws InvalidInput otherwise.
int legendre(std::int64_t a, std::uint64_t q);

struct LpsParams {
  std::uint64_t p = 0;
  std::uint64_t q = 0;
  bool residue_case = false;  // (p/q) == 1: PSL2(q), non-bipartite

  // Validates: distinct primes, both = 1 mod 4.
  static LpsParams make(std::uint64_t p, std::uint64_t q);

  std::uint64_t vertex_count() const noexcept {
    const std::uint64_t full = q * (q * q - 1);
    return residue_case ? full / 2 : full;
  }
};

// The p + 1 solutions of a0^2 + a1^2 + a2^2 + a3^2 = p with a0 odd positive and
// a1, a2, a3 even (p = 1 mod 4).
std::vector<std::array<std::int64_t, 4>> lps_generators(std::uint64_t p);

struct LpsOptions {
  // Refuse constructions with more than this many (vertex, generator) arcs.
  std::uint64_t max_arcs = 30'000'000;
};

// Cayley graph of the subgroup of PGL2(q) generated by the quaternion matrices,
// explored breadth-first from the identity; vertex 0 is the identity.
RegularGraph lps_construct(const LpsParams& params, const LpsOptions& options = {});

struct SpectralOptions {
  std::size_t dense_limit = 4000;
  bool allow_estimate = true;
  std::size_t power_starts = 50;
  std::size_t power_iterations = 100;
  std::uint64_t seed = 0x5eed;
};

// Dense eigendecomposition up to dense_limit vertices; past it, a deflated
// power-iteration estimate (or CapabilityError when estimates are disallowed).
SpectralCertificate spectral_check(const RegularGraph& g, double p,
                                   const SpectralOptions& options = {});

// Edges with one endpoint in each (disjoint) set, counted with multiplicity.
std::uint64_t count_cross_edges(const RegularGraph& g, std::span<const std::uint32_t> v1,
                                std::span<const std::uint32_t> v2);

// |e(V1,V2) - (p+1)|V1||V2|/n| <= 2 sqrt(p |V1||V2|)
bool mixing_check(const RegularGraph& g, std::span<const std::uint32_t> v1,
                  std::span<const std::uint32_t> v2, double p);

// e(V1,V2) >= x^2 * |E| for sets of size >= x n when p >= 16/x^2.
// Unmet preconditions throw PreconditionError.
bool edge_density_guarantee(const RegularGraph& g, double p, double x,
                            std::span<const std::uint32_t> v1, std::span<const std::uint32_t> v2);

// Uniform-ish simple d-regular graph (pairing model with restarts).
RegularGraph random_regular_graph(std::size_t n, std::size_t degree, CounterRng& rng);

enum class GraphMode { strict, empirical };

// Smallest LPS graph (then smallest p) with >= n_needed vertices and degree >= degree_needed.
LpsParams smallest_lps(std::uint64_t n_needed, std::uint64_t degree_needed);

struct ProviderOptions {
  GraphMode mode = GraphMode::empirical;
  std::uint64_t seed = 0;
  double empirical_slack = 1.1;  // accept lambda <= 2 sqrt(d-1) * slack
  std::size_t max_attempts = 64;
  SpectralOptions spectral{};
  LpsOptions lps{};
};

// strict: smallest_lps + lps_construct (oversized; callers restrict).
// empirical: certified random regular graph of exactly n_needed vertices.
// Each call draws from its own substream, so a fixed call sequence is reproducible.
class GraphProvider {
 public:
  explicit GraphProvider(ProviderOptions options) : options_(options) {}

  RegularGraph operator()(std::size_t n_needed, std::size_t degree_needed);

  const ProviderOptions& options() const noexcept { return options_; }

 private:
  ProviderOptions options_;
  std::uint64_t calls_ = 0;
};

// "n degree" header, then one 0-based "u v" pair per line.
void write_edge_list(std::ostream& out, const RegularGraph& g);
RegularGraph read_edge_list(std::istream& in);

}  // namespace spyswap
