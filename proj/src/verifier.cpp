#include "icregime/verifier.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <thread>

#include "icregime/errors.hpp"
#include "icregime/measures.hpp"
#include "icregime/rng.hpp"
#include "icregime/simplex.hpp"

namespace icregime::verifier {

namespace {

constexpr std::uint64_t kFnvOffset = 14695981039346656037ULL;
constexpr std::uint64_t kFnvPrime = 1099511628211ULL;

std::uint64_t fnv1a(std::uint64_t h, const void* data, size_t bytes) {
  const auto* p = static_cast<const unsigned char*>(data);
  for (size_t i = 0; i < bytes; ++i) {
    h ^= p[i];
    h *= kFnvPrime;
  }
  return h;
}

std::uint64_t fnv1a_int(std::uint64_t h, long v) { return fnv1a(h, &v, sizeof(v)); }

void require_valid(const model::DiscreteTwoOutputChannel& ch) {
  auto bad = validate(ch);
  if (!bad.empty()) throw std::invalid_argument(bad.front());
}

// ---------------------------------------------------------------------------
// composition enumeration over the probability grid

// next vector with the same nonnegative sum, reverse-lex order, starting
// from (m, 0, .., 0); returns false after (0, .., 0, m)
bool next_composition(std::vector<int>& c) {
  const int k = static_cast<int>(c.size());
  if (k <= 1) return false;
  int i = k - 2;
  while (i >= 0 && c[i] == 0) --i;
  if (i < 0) return false;
  int tail = 0;
  for (int t = i + 1; t < k; ++t) {
    tail += c[t];
    c[t] = 0;
  }
  c[i] -= 1;
  c[i + 1] = tail + 1;
  return true;
}

// C(total+parts-1, parts-1), saturating well above any usable grid size
std::size_t composition_count(int total, int parts) {
  if (parts <= 1) return 1;
  long double r = 1.0L;
  for (int i = 1; i <= parts - 1; ++i)
    r = r * static_cast<long double>(total + i) / static_cast<long double>(i);
  const long double cap = 1e18L;
  return static_cast<std::size_t>(std::min(cap, r + 0.5L));
}

int resolve_threads(int requested, std::size_t work_items) {
  if (work_items < 256) return 1;
  int t = requested;
  if (t <= 0) t = static_cast<int>(std::thread::hardware_concurrency());
  if (t < 1) t = 1;
  t = std::min<int>(t, 8);
  t = static_cast<int>(std::min<std::size_t>(t, work_items));
  return t;
}

template <typename Fn>
void parallel_chunks(std::size_t n, int threads, Fn fn) {
  if (threads <= 1) {
    fn(0, 0, n);
    return;
  }
  std::vector<std::thread> pool;
  const std::size_t chunk = (n + threads - 1) / threads;
  for (int t = 0; t < threads; ++t) {
    const std::size_t begin = std::min(n, t * chunk);
    const std::size_t end = std::min(n, begin + chunk);
    pool.emplace_back([=]() { fn(t, begin, end); });
  }
  for (auto& th : pool) th.join();
}

// deterministic (gap, key) minimum: smaller gap wins, lexicographically
// smaller key breaks exact ties, so the reduction is order-independent
struct BestGap {
  double gap = std::numeric_limits<double>::infinity();
  std::vector<int> key;

  bool offer(double g, const std::vector<int>& k) {
    if (g < gap || (g == gap && (key.empty() || k < key))) {
      gap = g;
      key = k;
      return true;
    }
    return false;
  }

  void merge(const BestGap& other) {
    if (!other.key.empty()) offer(other.gap, other.key);
  }
};

// ---------------------------------------------------------------------------
// fast single-law evaluator

struct ChannelTables {
  int block_cells = 1;
  int cond_cells = 1;
  int y1 = 0, y2 = 0;
  std::vector<double> t1, t2;   // per-output marginal transitions [x][y]
  std::vector<double> dh;       // H(Y2|x) - H(Y1|x)

  explicit ChannelTables(const model::DiscreteTwoOutputChannel& ch) {
    for (int v = 0; v < ch.mu1; ++v) block_cells *= ch.input_alphabets[v];
    for (int v = ch.mu1; v < ch.input_count(); ++v)
      cond_cells *= ch.input_alphabets[v];
    y1 = ch.y1_size;
    y2 = ch.y2_size;
    const int x_cells = block_cells * cond_cells;
    t1.assign(static_cast<size_t>(x_cells) * y1, 0.0);
    t2.assign(static_cast<size_t>(x_cells) * y2, 0.0);
    dh.assign(x_cells, 0.0);
    for (int x = 0; x < x_cells; ++x) {
      for (int a = 0; a < y1; ++a)
        for (int b = 0; b < y2; ++b) {
          const double p = ch.prob(x, a, b);
          t1[static_cast<size_t>(x) * y1 + a] += p;
          t2[static_cast<size_t>(x) * y2 + b] += p;
        }
      const double h1 = measures::entropy(
          std::span(t1).subspan(static_cast<size_t>(x) * y1, y1));
      const double h2 = measures::entropy(
          std::span(t2).subspan(static_cast<size_t>(x) * y2, y2));
      dh[x] = h2 - h1;
    }
  }

  int x_cells() const { return block_cells * cond_cells; }

  // gap = I(block; Y2 | cond) - I(block; Y1 | cond) at an arbitrary joint
  // input law w (row-major over inputs, block variables leading); the H(cond)
  // terms cancel between the two sides.
  double gap(const double* w) const {
    std::array<double, 64> mix1{}, mix2{};
    double hy1c = 0.0, hy2c = 0.0, sum_dh = 0.0;
    for (int c = 0; c < cond_cells; ++c) {
      mix1.fill(0.0);
      mix2.fill(0.0);
      for (int b = 0; b < block_cells; ++b) {
        const int x = b * cond_cells + c;
        const double wx = w[x];
        if (wx == 0.0) continue;
        sum_dh += wx * dh[x];
        const double* r1 = &t1[static_cast<size_t>(x) * y1];
        const double* r2 = &t2[static_cast<size_t>(x) * y2];
        for (int y = 0; y < y1; ++y) mix1[y] += wx * r1[y];
        for (int y = 0; y < y2; ++y) mix2[y] += wx * r2[y];
      }
      for (int y = 0; y < y1; ++y)
        if (mix1[y] > 0.0) hy1c -= mix1[y] * std::log2(mix1[y]);
      for (int y = 0; y < y2; ++y)
        if (mix2[y] > 0.0) hy2c -= mix2[y] * std::log2(mix2[y]);
    }
    return (hy2c - hy1c) - sum_dh;
  }
};

std::vector<double> expand_product_law(const model::DiscreteTwoOutputChannel& ch,
                                       const ProductLaw& law) {
  int block_cells = 1, cond_cells = 1;
  for (int v = 0; v < ch.mu1; ++v) block_cells *= ch.input_alphabets[v];
  for (int v = ch.mu1; v < ch.input_count(); ++v)
    cond_cells *= ch.input_alphabets[v];
  if (static_cast<int>(law.block.size()) != block_cells ||
      static_cast<int>(law.cond.size()) != ch.mu2)
    throw std::invalid_argument("product law dimensions do not match channel");

  std::vector<double> q(cond_cells, 1.0);
  for (int c = 0; c < cond_cells; ++c) {
    int rem = c;
    for (int v = ch.mu2 - 1; v >= 0; --v) {
      const int s = ch.input_alphabets[ch.mu1 + v];
      q[c] *= law.cond[v].at(rem % s);
      rem /= s;
    }
  }
  std::vector<double> w(static_cast<size_t>(block_cells) * cond_cells);
  for (int b = 0; b < block_cells; ++b)
    for (int c = 0; c < cond_cells; ++c)
      w[static_cast<size_t>(b) * cond_cells + c] = law.block[b] * q[c];
  return w;
}

// ---------------------------------------------------------------------------
// measures-route evaluation for the sampled operations

// law is row-major over (aux axes, input axes); the lhs/cond groups index
// into that axis list. Builds the joint with each output in turn and takes
// the conditional MI difference through the measures kernel.
double gap_via_measures(const model::DiscreteTwoOutputChannel& ch,
                        const ChannelTables& tab, std::span<const double> law,
                        const std::vector<int>& aux_sizes,
                        const std::vector<int>& lhs_axes,
                        const std::vector<int>& cond_axes) {
  const int x_cells = tab.x_cells();
  size_t aux_cells = 1;
  for (int s : aux_sizes) aux_cells *= static_cast<size_t>(s);
  if (law.size() != aux_cells * static_cast<size_t>(x_cells))
    throw std::invalid_argument("law size does not match aux and input axes");

  std::vector<measures::Axis> axes;
  for (size_t i = 0; i < aux_sizes.size(); ++i)
    axes.push_back({"A" + std::to_string(i), aux_sizes[i]});
  for (int v = 0; v < ch.input_count(); ++v)
    axes.push_back({"X" + std::to_string(v + 1), ch.input_alphabets[v]});
  const int y_axis = static_cast<int>(axes.size());

  auto mi_with_output = [&](const std::vector<double>& trans, int y_size,
                            const char* label) {
    std::vector<measures::Axis> joint_axes = axes;
    joint_axes.push_back({label, y_size});
    std::vector<double> probs(law.size() * y_size);
    size_t cell = 0;
    for (size_t ax = 0; ax < aux_cells; ++ax)
      for (int x = 0; x < x_cells; ++x) {
        const double p = law[ax * x_cells + x];
        const double* row = &trans[static_cast<size_t>(x) * y_size];
        for (int y = 0; y < y_size; ++y) probs[cell++] = p * row[y];
      }
    measures::JointPMF joint(std::move(joint_axes), std::move(probs));
    return measures::conditional_mutual_information(joint, lhs_axes, {y_axis},
                                                    cond_axes);
  };

  const double i1 = mi_with_output(tab.t1, tab.y1, "Y1");
  const double i2 = mi_with_output(tab.t2, tab.y2, "Y2");
  return i2 - i1;
}

struct SampledSetup {
  std::vector<int> aux_sizes;
  std::vector<int> lhs_axes;
  std::vector<int> cond_axes;
};

SampledGapResult run_sampled(const model::DiscreteTwoOutputChannel& ch,
                             const SampledSetup& setup, const SampleSpec& spec) {
  if (spec.n_samples < 1)
    throw std::invalid_argument("n_samples must be >= 1");
  if (!(spec.dirichlet_concentration > 0.0))
    throw std::invalid_argument("dirichlet_concentration must be positive");

  const ChannelTables tab(ch);
  size_t cells = static_cast<size_t>(tab.x_cells());
  for (int s : setup.aux_sizes) cells *= static_cast<size_t>(s);

  // laws are drawn sequentially so the stream depends only on the seed
  rng::Engine engine(spec.seed);
  std::vector<std::vector<double>> laws(spec.n_samples);
  for (auto& law : laws)
    law = engine.dirichlet(cells, spec.dirichlet_concentration);

  SampledGapResult result;
  result.gaps.assign(spec.n_samples, 0.0);
  const int threads = resolve_threads(spec.threads, spec.n_samples);
  std::vector<BestGap> best(threads);
  parallel_chunks(spec.n_samples, threads, [&](int t, size_t begin, size_t end) {
    for (size_t i = begin; i < end; ++i) {
      const double g = gap_via_measures(ch, tab, laws[i], setup.aux_sizes,
                                        setup.lhs_axes, setup.cond_axes);
      result.gaps[i] = g;
      best[t].offer(g, {static_cast<int>(i)});
    }
  });
  BestGap overall;
  for (const auto& b : best) overall.merge(b);

  result.min_gap = overall.gap;
  result.worst_joint = laws[overall.key.front()];
  result.axis_sizes = setup.aux_sizes;
  for (int v = 0; v < ch.input_count(); ++v)
    result.axis_sizes.push_back(ch.input_alphabets[v]);
  result.n_evaluated = static_cast<size_t>(spec.n_samples);
  return result;
}

SampledSetup lemma1_setup(const model::DiscreteTwoOutputChannel& ch, int d_size) {
  if (d_size < 1) throw std::invalid_argument("d_size must be >= 1");
  SampledSetup setup;
  setup.aux_sizes = {d_size};
  for (int v = 0; v < ch.mu1; ++v) setup.lhs_axes.push_back(1 + v);
  setup.cond_axes.push_back(0);
  for (int v = ch.mu1; v < ch.input_count(); ++v) setup.cond_axes.push_back(1 + v);
  return setup;
}

}  // namespace

// ---------------------------------------------------------------------------

model::DiscreteTwoOutputChannel make_degraded_channel(
    int mu1, int mu2, const std::vector<int>& input_alphabets,
    const model::StochasticMatrix& base, const model::StochasticMatrix& garble) {
  auto base_bad = validate(base);
  auto garble_bad = validate(garble);
  if (!base_bad.empty())
    throw std::invalid_argument("base: " + base_bad.front());
  if (!garble_bad.empty())
    throw std::invalid_argument("garble: " + garble_bad.front());

  int tuples = 1;
  for (int s : input_alphabets) tuples *= s;
  if (base.rows != tuples)
    throw std::invalid_argument("base: row count does not match input alphabets");
  if (garble.rows != base.cols)
    throw std::invalid_argument("garble: rows must match base output alphabet");

  const int y2 = base.cols;
  const int y1 = garble.cols;
  std::vector<double> transitions(static_cast<size_t>(tuples) * y1 * y2);
  for (int x = 0; x < tuples; ++x)
    for (int a = 0; a < y1; ++a)
      for (int b = 0; b < y2; ++b)
        transitions[(static_cast<size_t>(x) * y1 + a) * y2 + b] =
            base(x, b) * garble(b, a);
  return model::DiscreteTwoOutputChannel::create(mu1, mu2, input_alphabets, y1,
                                                 y2, std::move(transitions));
}

model::DiscreteTwoOutputChannel swap_outputs(const model::DiscreteTwoOutputChannel& ch) {
  require_valid(ch);
  model::DiscreteTwoOutputChannel out = ch;
  out.y1_size = ch.y2_size;
  out.y2_size = ch.y1_size;
  const int tuples = ch.input_tuple_count();
  for (int x = 0; x < tuples; ++x)
    for (int a = 0; a < ch.y2_size; ++a)
      for (int b = 0; b < ch.y1_size; ++b)
        out.transitions[(static_cast<size_t>(x) * out.y1_size + a) * out.y2_size + b] =
            ch.prob(x, b, a);
  return out;
}

model::DiscreteTwoOutputChannel two_letter_extension(
    const model::DiscreteTwoOutputChannel& ch) {
  require_valid(ch);
  const int n_in = ch.input_count();
  const int tuples = ch.input_tuple_count();
  const long pair_tuples = static_cast<long>(tuples) * tuples;
  if (pair_tuples > model::kMaxInputTuples)
    throw std::invalid_argument(
        "two_letter_extension: squared input tuple count " +
        std::to_string(pair_tuples) + " exceeds cap " +
        std::to_string(model::kMaxInputTuples));

  model::DiscreteTwoOutputChannel out;
  out.mu1 = ch.mu1;
  out.mu2 = ch.mu2;
  for (int s : ch.input_alphabets) out.input_alphabets.push_back(s * s);
  out.y1_size = ch.y1_size * ch.y1_size;
  out.y2_size = ch.y2_size * ch.y2_size;
  out.transitions.assign(static_cast<size_t>(pair_tuples) * out.y1_size * out.y2_size, 0.0);

  std::vector<int> dx(n_in), dx2(n_in);
  for (int x = 0; x < tuples; ++x) {
    int rem = x;
    for (int v = n_in - 1; v >= 0; --v) {
      dx[v] = rem % ch.input_alphabets[v];
      rem /= ch.input_alphabets[v];
    }
    for (int x2 = 0; x2 < tuples; ++x2) {
      rem = x2;
      for (int v = n_in - 1; v >= 0; --v) {
        dx2[v] = rem % ch.input_alphabets[v];
        rem /= ch.input_alphabets[v];
      }
      long flat = 0;
      for (int v = 0; v < n_in; ++v)
        flat = flat * out.input_alphabets[v] +
               (dx[v] * ch.input_alphabets[v] + dx2[v]);
      for (int a = 0; a < ch.y1_size; ++a)
        for (int a2 = 0; a2 < ch.y1_size; ++a2)
          for (int b = 0; b < ch.y2_size; ++b)
            for (int b2 = 0; b2 < ch.y2_size; ++b2) {
              const int ya = a * ch.y1_size + a2;
              const int yb = b * ch.y2_size + b2;
              out.transitions[(static_cast<size_t>(flat) * out.y1_size + ya) *
                                  out.y2_size + yb] =
                  ch.prob(x, a, b) * ch.prob(x2, a2, b2);
            }
    }
  }
  return out;
}

double gap_at(const model::DiscreteTwoOutputChannel& ch,
              std::span<const double> input_joint) {
  const ChannelTables tab(ch);
  if (input_joint.size() != static_cast<size_t>(tab.x_cells()))
    throw std::invalid_argument("input joint size does not match channel");
  return tab.gap(input_joint.data());
}

double gap_at(const model::DiscreteTwoOutputChannel& ch, const ProductLaw& law) {
  return gap_at(ch, expand_product_law(ch, law));
}

GridGapResult grid_min_gap(const model::DiscreteTwoOutputChannel& ch,
                           const GridSpec& grid) {
  require_valid(ch);
  if (grid.resolution < 2)
    throw std::invalid_argument("grid resolution must be >= 2");

  const ChannelTables tab(ch);
  const int m = grid.resolution;
  const int n_cond = ch.mu2;

  std::size_t projected = composition_count(m, tab.block_cells);
  std::vector<std::vector<std::vector<int>>> cond_comp_lists(n_cond);
  for (int v = 0; v < n_cond; ++v) {
    const int s = ch.input_alphabets[ch.mu1 + v];
    projected = projected * composition_count(m, s);
    std::vector<int> comp(s, 0);
    comp[0] = m;
    do {
      cond_comp_lists[v].push_back(comp);
    } while (next_composition(comp));
    if (projected > grid.max_points) throw GridOverflowError(projected);
  }
  if (projected > grid.max_points) throw GridOverflowError(projected);

  // block compositions, enumerated once
  std::vector<std::vector<int>> block_comps;
  {
    std::vector<int> comp(tab.block_cells, 0);
    comp[0] = m;
    do {
      block_comps.push_back(comp);
    } while (next_composition(comp));
  }

  // cond digit decomposition table: flat cond cell -> per-variable letter
  std::vector<std::vector<int>> cond_digits(tab.cond_cells, std::vector<int>(n_cond, 0));
  for (int c = 0; c < tab.cond_cells; ++c) {
    int rem = c;
    for (int v = n_cond - 1; v >= 0; --v) {
      cond_digits[c][v] = rem % ch.input_alphabets[ch.mu1 + v];
      rem /= ch.input_alphabets[ch.mu1 + v];
    }
  }

  const double inv_m = 1.0 / m;
  const int threads = resolve_threads(grid.threads, block_comps.size());
  std::vector<BestGap> best(threads);

  parallel_chunks(block_comps.size(), threads, [&](int t, size_t begin, size_t end) {
    std::vector<double> pb(tab.block_cells);
    std::vector<double> q(tab.cond_cells);
    std::vector<double> w(static_cast<size_t>(tab.x_cells()));
    std::vector<int> combo(n_cond, 0);
    std::vector<int> key;
    for (size_t bi = begin; bi < end; ++bi) {
      for (int i = 0; i < tab.block_cells; ++i) pb[i] = block_comps[bi][i] * inv_m;
      std::fill(combo.begin(), combo.end(), 0);
      for (;;) {
        for (int c = 0; c < tab.cond_cells; ++c) {
          double prod = 1.0;
          for (int v = 0; v < n_cond; ++v)
            prod *= cond_comp_lists[v][combo[v]][cond_digits[c][v]] * inv_m;
          q[c] = prod;
        }
        for (int b = 0; b < tab.block_cells; ++b)
          for (int c = 0; c < tab.cond_cells; ++c)
            w[static_cast<size_t>(b) * tab.cond_cells + c] = pb[b] * q[c];
        const double g = tab.gap(w.data());

        key.assign(block_comps[bi].begin(), block_comps[bi].end());
        for (int v = 0; v < n_cond; ++v)
          key.insert(key.end(), cond_comp_lists[v][combo[v]].begin(),
                     cond_comp_lists[v][combo[v]].end());
        best[t].offer(g, key);

        int v = n_cond - 1;
        while (v >= 0 && ++combo[v] == static_cast<int>(cond_comp_lists[v].size())) {
          combo[v] = 0;
          --v;
        }
        if (v < 0) break;
      }
    }
  });

  BestGap overall;
  for (const auto& b : best) overall.merge(b);

  GridGapResult result;
  result.min_gap = overall.gap;
  result.n_evaluated = projected;

  // rebuild the argmin product law from the winning key digits
  result.argmin.block.resize(tab.block_cells);
  size_t pos = 0;
  for (int i = 0; i < tab.block_cells; ++i)
    result.argmin.block[i] = overall.key[pos++] * inv_m;
  result.argmin.cond.resize(n_cond);
  for (int v = 0; v < n_cond; ++v) {
    const int s = ch.input_alphabets[ch.mu1 + v];
    result.argmin.cond[v].resize(s);
    for (int i = 0; i < s; ++i) result.argmin.cond[v][i] = overall.key[pos++] * inv_m;
  }
  return result;
}

SampledGapResult sample_lemma1_gap(const model::DiscreteTwoOutputChannel& ch,
                                   int d_size, const SampleSpec& spec) {
  require_valid(ch);
  return run_sampled(ch, lemma1_setup(ch, d_size), spec);
}

SampledGapResult sample_lemma3_gap_n2(const model::DiscreteTwoOutputChannel& ch,
                                      int d_size, const SampleSpec& spec) {
  require_valid(ch);
  const model::DiscreteTwoOutputChannel product = two_letter_extension(ch);
  return run_sampled(product, lemma1_setup(product, d_size), spec);
}

SampledGapResult sample_lemma4_gap(const model::DiscreteTwoOutputChannel& ch,
                                   int u_size, int d_size, const SampleSpec& spec) {
  require_valid(ch);
  if (u_size < 1) throw std::invalid_argument("u_size must be >= 1");
  if (d_size < 1) throw std::invalid_argument("d_size must be >= 1");
  SampledSetup setup;
  setup.aux_sizes = {d_size, u_size};
  setup.lhs_axes = {1};
  setup.cond_axes.push_back(0);
  for (int v = ch.mu1; v < ch.input_count(); ++v) setup.cond_axes.push_back(2 + v);
  return run_sampled(ch, setup, spec);
}

SampledGapResult corollary1_gap(const model::DiscreteTwoOutputChannel& ch,
                                const std::vector<int>& l, int d_size,
                                const SampleSpec& spec) {
  require_valid(ch);
  std::vector<bool> in_l(ch.mu1, false);
  for (int idx : l) {
    if (idx < 1 || idx > ch.mu1)
      throw std::invalid_argument(
          "corollary1_gap: L may only contain joint-block indices (1.." +
          std::to_string(ch.mu1) + ")");
    in_l[idx - 1] = true;
  }
  if (d_size < 1) throw std::invalid_argument("d_size must be >= 1");
  SampledSetup setup;
  setup.aux_sizes = {d_size};
  for (int v = 0; v < ch.mu1; ++v)
    (in_l[v] ? setup.cond_axes : setup.lhs_axes).push_back(1 + v);
  setup.cond_axes.push_back(0);
  for (int v = ch.mu1; v < ch.input_count(); ++v) setup.cond_axes.push_back(1 + v);
  std::sort(setup.cond_axes.begin(), setup.cond_axes.end());
  return run_sampled(ch, setup, spec);
}

double lemma1_gap_at(const model::DiscreteTwoOutputChannel& ch, int d_size,
                     std::span<const double> law) {
  const ChannelTables tab(ch);
  const SampledSetup setup = lemma1_setup(ch, d_size);
  return gap_via_measures(ch, tab, law, setup.aux_sizes, setup.lhs_axes,
                          setup.cond_axes);
}

double lemma4_gap_at(const model::DiscreteTwoOutputChannel& ch, int u_size,
                     int d_size, std::span<const double> law) {
  const ChannelTables tab(ch);
  SampledSetup setup;
  setup.aux_sizes = {d_size, u_size};
  setup.lhs_axes = {1};
  setup.cond_axes.push_back(0);
  for (int v = ch.mu1; v < ch.input_count(); ++v) setup.cond_axes.push_back(2 + v);
  return gap_via_measures(ch, tab, law, setup.aux_sizes, setup.lhs_axes,
                          setup.cond_axes);
}

DegradationResult degradation_feasibility(const model::StochasticMatrix& p1,
                                          const model::StochasticMatrix& p2) {
  auto bad1 = validate(p1);
  auto bad2 = validate(p2);
  if (!bad1.empty()) throw std::invalid_argument("p1: " + bad1.front());
  if (!bad2.empty()) throw std::invalid_argument("p2: " + bad2.front());
  if (p1.rows != p2.rows)
    throw std::invalid_argument("input alphabets differ between the channels");

  constexpr double kFeasTol = 1e-9;
  const int y1 = p1.cols, y2 = p2.cols, xs = p1.rows;
  const int n_vars = y1 * y2;  // G[i][j], row-major

  std::vector<std::vector<double>> a;
  std::vector<double> b;
  for (int x = 0; x < xs; ++x)
    for (int j = 0; j < y2; ++j) {
      std::vector<double> row(n_vars, 0.0);
      for (int i = 0; i < y1; ++i) row[i * y2 + j] = p1(x, i);
      a.push_back(std::move(row));
      b.push_back(p2(x, j));
    }
  for (int i = 0; i < y1; ++i) {
    std::vector<double> row(n_vars, 0.0);
    for (int j = 0; j < y2; ++j) row[i * y2 + j] = 1.0;
    a.push_back(std::move(row));
    b.push_back(1.0);
  }

  DegradationResult result;
  auto point = lp::equality_feasible_point(a, b, kFeasTol);
  if (!point) return result;

  // clean the witness and confirm the residuals honestly
  std::vector<double> g = std::move(*point);
  for (double& v : g) v = std::max(0.0, v);
  for (int i = 0; i < y1; ++i) {
    double sum = 0.0;
    for (int j = 0; j < y2; ++j) sum += g[i * y2 + j];
    if (sum <= 0.0) return result;
    for (int j = 0; j < y2; ++j) g[i * y2 + j] /= sum;
  }
  double max_residual = 0.0;
  for (int x = 0; x < xs; ++x)
    for (int j = 0; j < y2; ++j) {
      double lhs = 0.0;
      for (int i = 0; i < y1; ++i) lhs += p1(x, i) * g[i * y2 + j];
      max_residual = std::max(max_residual, std::abs(lhs - p2(x, j)));
    }
  if (max_residual > kFeasTol) return result;

  result.degraded = true;
  result.garble = model::StochasticMatrix::create(y1, y2, std::move(g), 1e-9);
  result.max_residual = max_residual;
  return result;
}

OrderResult bc_more_capable_order(const model::DiscreteBroadcastChannel& bc,
                                  const GridSpec& grid) {
  auto bad = validate(bc);
  if (!bad.empty()) throw std::invalid_argument(bad.front());
  if (grid.resolution < 2)
    throw std::invalid_argument("grid resolution must be >= 2");

  const int k = bc.receivers();
  const int xs = bc.x_size;
  const std::size_t projected = composition_count(grid.resolution, xs);
  if (projected > grid.max_points) throw GridOverflowError(projected);

  // per-receiver row entropies
  std::vector<std::vector<double>> row_h(k, std::vector<double>(xs, 0.0));
  for (int r = 0; r < k; ++r)
    for (int x = 0; x < xs; ++x)
      row_h[r][x] = measures::entropy(
          std::span(bc.marginals[r].p).subspan(static_cast<size_t>(x) * bc.marginals[r].cols,
                                               bc.marginals[r].cols));

  std::vector<std::vector<double>> margin(
      k, std::vector<double>(k, std::numeric_limits<double>::infinity()));

  std::vector<int> comp(xs, 0);
  comp[0] = grid.resolution;
  std::vector<double> p(xs), mi(k);
  std::size_t n_points = 0;
  const double inv_m = 1.0 / grid.resolution;
  do {
    ++n_points;
    for (int x = 0; x < xs; ++x) p[x] = comp[x] * inv_m;
    for (int r = 0; r < k; ++r) {
      const auto& mat = bc.marginals[r];
      double hy = 0.0;
      for (int y = 0; y < mat.cols; ++y) {
        double qy = 0.0;
        for (int x = 0; x < xs; ++x) qy += p[x] * mat(x, y);
        if (qy > 0.0) hy -= qy * std::log2(qy);
      }
      double hyx = 0.0;
      for (int x = 0; x < xs; ++x) hyx += p[x] * row_h[r][x];
      mi[r] = hy - hyx;
    }
    for (int i = 0; i < k; ++i)
      for (int j = 0; j < k; ++j)
        if (i != j) margin[i][j] = std::min(margin[i][j], mi[i] - mi[j]);
  } while (next_composition(comp));

  OrderResult result;
  result.n_evaluated = n_points;

  std::vector<int> perm(k);
  for (int i = 0; i < k; ++i) perm[i] = i + 1;
  do {
    bool ok = true;
    for (int a = 0; a < k && ok; ++a)
      for (int b = a + 1; b < k && ok; ++b)
        if (margin[perm[a] - 1][perm[b] - 1] < -kGapTol) ok = false;
    if (ok) {
      result.order = perm;
      for (int a = 0; a + 1 < k; ++a)
        result.min_margins.push_back(margin[perm[a] - 1][perm[a + 1] - 1]);
      return result;
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  return result;
}

SumCapacityResult bc_sum_capacity(const model::DiscreteBroadcastChannel& bc,
                                  int strongest) {
  auto bad = validate(bc);
  if (!bad.empty()) throw std::invalid_argument(bad.front());
  if (strongest < 1 || strongest > bc.receivers())
    throw std::invalid_argument("strongest receiver index out of range");

  const auto& mat = bc.marginals[strongest - 1];
  const int xs = mat.rows, ys = mat.cols;
  constexpr int kMaxIters = 10000;
  constexpr double kConvergeTol = 1e-10;

  std::vector<double> p(xs, 1.0 / xs), q(ys), d(xs);
  double prev = -std::numeric_limits<double>::infinity();
  for (int it = 1; it <= kMaxIters; ++it) {
    std::fill(q.begin(), q.end(), 0.0);
    for (int x = 0; x < xs; ++x)
      for (int y = 0; y < ys; ++y) q[y] += p[x] * mat(x, y);
    for (int x = 0; x < xs; ++x) {
      double dx = 0.0;
      for (int y = 0; y < ys; ++y) {
        const double t = mat(x, y);
        if (t > 0.0) dx += t * std::log2(t / q[y]);
      }
      d[x] = dx;
    }
    double estimate = 0.0;
    for (int x = 0; x < xs; ++x) estimate += p[x] * d[x];

    if (estimate < prev - 1e-12)
      throw NumericError("capacity iteration decreased: " + std::to_string(prev) +
                         " -> " + std::to_string(estimate));
    if (std::abs(estimate - prev) < kConvergeTol) {
      SumCapacityResult result;
      result.capacity = estimate;
      result.argmax = model::DiscretePMF::create(p, 1e-9);
      result.iterations = it;
      return result;
    }
    prev = estimate;

    double z = 0.0;
    for (int x = 0; x < xs; ++x) {
      p[x] *= std::exp2(d[x]);
      z += p[x];
    }
    for (int x = 0; x < xs; ++x) p[x] /= z;
  }
  throw NumericError("capacity iteration did not converge in 10000 steps; last estimate " +
                     std::to_string(prev));
}

std::uint64_t channel_digest(const model::DiscreteTwoOutputChannel& ch) {
  std::uint64_t h = kFnvOffset;
  h = fnv1a_int(h, ch.mu1);
  h = fnv1a_int(h, ch.mu2);
  for (int s : ch.input_alphabets) h = fnv1a_int(h, s);
  h = fnv1a_int(h, ch.y1_size);
  h = fnv1a_int(h, ch.y2_size);
  h = fnv1a(h, ch.transitions.data(), ch.transitions.size() * sizeof(double));
  return h;
}

std::uint64_t channel_digest(const model::DiscreteBroadcastChannel& bc) {
  std::uint64_t h = kFnvOffset;
  h = fnv1a_int(h, bc.x_size);
  for (const auto& m : bc.marginals) {
    h = fnv1a_int(h, m.rows);
    h = fnv1a_int(h, m.cols);
    h = fnv1a(h, m.p.data(), m.p.size() * sizeof(double));
  }
  return h;
}

}  // namespace icregime::verifier
