#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "icregime/model.hpp"

namespace icregime::verifier {

// Gap results above -kGapTol count as round-off, below as violations.
inline constexpr double kGapTol = 1e-10;

struct GridSpec {
  int resolution = 8;                    // marginals range over {0, 1/m, .., 1}
  std::size_t max_points = 10'000'000;   // projected grid size cap
  int threads = 0;                       // 0 = auto; result independent of it
};

struct SampleSpec {
  int n_samples = 200;
  std::uint64_t seed = 0;
  double dirichlet_concentration = 1.0;
  int threads = 0;
};

struct GridOverflowError : std::runtime_error {
  std::size_t projected_points;
  explicit GridOverflowError(std::size_t projected)
      : std::runtime_error("grid overflow: projected size " +
                           std::to_string(projected) + " points"),
        projected_points(projected) {}
};

// Ground-truth generator: P(y1, y2 | x) = base(x, y2) * garble(y2, y1), so Y1
// is a stochastic garbling of Y2 and the degradation inequality holds for
// every input law.
model::DiscreteTwoOutputChannel make_degraded_channel(
    int mu1, int mu2, const std::vector<int>& input_alphabets,
    const model::StochasticMatrix& base, const model::StochasticMatrix& garble);

// Exchanges the two outputs (turns a degraded instance into a witness that
// violates the inequality).
model::DiscreteTwoOutputChannel swap_outputs(const model::DiscreteTwoOutputChannel& ch);

// Memoryless two-letter product channel: every input alphabet squares (pair
// variables), outputs become (y, y') pairs. Exempt from the per-variable
// alphabet cap; the total input-tuple cap still applies.
model::DiscreteTwoOutputChannel two_letter_extension(const model::DiscreteTwoOutputChannel& ch);

// Product input law for the grid family: one joint over the block variables,
// one marginal per conditioning input.
struct ProductLaw {
  std::vector<double> block;
  std::vector<std::vector<double>> cond;
};

// Gap I(block; Y2 | cond) - I(block; Y1 | cond) at a single input law; the
// joint is row-major over the channel's input variables and need not factor.
double gap_at(const model::DiscreteTwoOutputChannel& ch, std::span<const double> input_joint);
double gap_at(const model::DiscreteTwoOutputChannel& ch, const ProductLaw& law);

struct GridGapResult {
  double min_gap = 0.0;
  ProductLaw argmin;
  std::size_t n_evaluated = 0;
};

// Exhaustive scan of the factorized family on the simplex grid: block joint
// over compositions of m, independent marginals per conditioning input.
// min_gap >= -kGapTol is evidence (not proof) that the inequality holds; a
// negative gap is a disproof. Throws GridOverflowError when the projected
// grid exceeds max_points.
GridGapResult grid_min_gap(const model::DiscreteTwoOutputChannel& ch, const GridSpec& grid);

struct SampledGapResult {
  double min_gap = 0.0;
  std::vector<double> worst_joint;   // flat over axis_sizes
  std::vector<int> axis_sizes;       // auxiliaries first, then inputs
  std::vector<double> gaps;          // per-sample, in sample order
  std::size_t n_evaluated = 0;
};

// Dirichlet-sampled joints P(d, x) on the full simplex; D satisfies the
// required Markov chain by construction since the channel acts only on x.
SampledGapResult sample_lemma1_gap(const model::DiscreteTwoOutputChannel& ch,
                                   int d_size, const SampleSpec& spec);

// Two-letter version: the conclusion is quantified over arbitrary joints
// across time, so the sampling runs on the product channel's full simplex.
SampledGapResult sample_lemma3_gap_n2(const model::DiscreteTwoOutputChannel& ch,
                                      int d_size, const SampleSpec& spec);

// Auxiliary-level gap I(U; Y2 | cond, D) - I(U; Y1 | cond, D) over sampled
// joints P(d, u, x).
SampledGapResult sample_lemma4_gap(const model::DiscreteTwoOutputChannel& ch,
                                   int u_size, int d_size, const SampleSpec& spec);

// Moves the block variables listed in `l` (1-based, within 1..mu1) into the
// conditioning set next to D.
SampledGapResult corollary1_gap(const model::DiscreteTwoOutputChannel& ch,
                                const std::vector<int>& l, int d_size,
                                const SampleSpec& spec);

// Single-law evaluation used by the sampled paths, exposed for
// deterministic witnesses: law is row-major over (d, inputs) resp.
// (d, u, inputs).
double lemma1_gap_at(const model::DiscreteTwoOutputChannel& ch, int d_size,
                     std::span<const double> law);
double lemma4_gap_at(const model::DiscreteTwoOutputChannel& ch, int u_size,
                     int d_size, std::span<const double> law);

struct DegradationResult {
  bool degraded = false;
  std::optional<model::StochasticMatrix> garble;
  double max_residual = 0.0;
};

// Linear feasibility: does a row-stochastic G exist with p2 = p1 * G?
// Returns a witness when it does (1e-9 per-equation tolerance).
DegradationResult degradation_feasibility(const model::StochasticMatrix& p1,
                                          const model::StochasticMatrix& p2);

struct OrderResult {
  std::optional<std::vector<int>> order;   // receivers, strongest first, 1-based
  std::vector<double> min_margins;         // adjacent-pair minima along the order
  std::size_t n_evaluated = 0;
};

// Scans the input simplex grid for a total order of the single-letter mutual
// informations. Margins in [-kGapTol, 0] count as ties and are reported
// rather than failing (strictness at isolated grid ties is unverifiable
// numerically).
OrderResult bc_more_capable_order(const model::DiscreteBroadcastChannel& bc,
                                  const GridSpec& grid);

struct SumCapacityResult {
  double capacity = 0.0;
  model::DiscretePMF argmax;
  int iterations = 0;
};

// Alternating capacity maximization for the strongest receiver's marginal.
// Stops when successive estimates differ by < 1e-10; throws NumericError at
// 10000 iterations with the last iterate in the message. The estimate
// sequence is checked to be nondecreasing every iteration.
SumCapacityResult bc_sum_capacity(const model::DiscreteBroadcastChannel& bc,
                                  int strongest);

// FNV-1a over dimensions and raw transition bytes; stable across runs.
std::uint64_t channel_digest(const model::DiscreteTwoOutputChannel& ch);
std::uint64_t channel_digest(const model::DiscreteBroadcastChannel& bc);

}  // namespace icregime::verifier
