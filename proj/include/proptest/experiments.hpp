#pragma once

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <numeric>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "proptest/decompose.hpp"
#include "proptest/digraph.hpp"
#include "proptest/distribution.hpp"
#include "proptest/errors.hpp"
#include "proptest/oracle.hpp"
#include "proptest/random.hpp"
#include "proptest/reduction.hpp"
#include "proptest/sequence.hpp"
#include "proptest/testers.hpp"

namespace proptest {

inline constexpr const char* kArtifactVersion = "0.1.0";

inline int resolve_jobs(int requested) {
  if (const char* env = std::getenv("PROPTEST_JOBS")) {
    int parsed = std::atoi(env);
    if (parsed > 0) requested = parsed;
  }
  if (requested <= 0) {
    unsigned hw = std::thread::hardware_concurrency();
    requested = hw == 0 ? 1 : static_cast<int>(hw);
  }
  return std::min(requested, 64);
}

// Index-driven parallel loop; results keyed by index stay deterministic
// regardless of scheduling.
template <typename Fn>
void parallel_for(long long count, int jobs, Fn&& fn) {
  if (count <= 0) return;
  jobs = static_cast<int>(std::max<long long>(1, std::min<long long>(jobs, count)));
  if (jobs <= 1) {
    for (long long i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<long long> next{0};
  std::vector<std::thread> workers;
  workers.reserve(static_cast<std::size_t>(jobs));
  for (int w = 0; w < jobs; ++w) {
    workers.emplace_back([&] {
      for (;;) {
        long long i = next.fetch_add(1);
        if (i >= count) return;
        fn(i);
      }
    });
  }
  for (auto& worker : workers) worker.join();
}

inline std::string format_double(double v, int precision = 6) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", precision, v);
  return buf;
}

// ceil(n^exponent) with a guard against pow() landing a hair above an exact
// integer power.
inline long long ceil_pow(long long n, double exponent) {
  double v = std::pow(static_cast<double>(n), exponent);
  return static_cast<long long>(std::ceil(v - 1e-9));
}

// --- exact identity verification ------------------------------------------

struct IdentityCheckRow {
  int k = 0;
  bool vandermonde = false;
  bool sums_to_one = false;
  bool p_k_zero = false;
  bool q_k_lower_bound = false;
  bool linear_relation = false;
  bool proportional_moments = false;

  bool all_pass() const {
    return vandermonde && sums_to_one && p_k_zero && q_k_lower_bound &&
           linear_relation && proportional_moments;
  }
};

inline bool pq_linear_relation_holds(const FrequencyDistribution& p,
                                     const FrequencyDistribution& q,
                                     const Rational& rho) {
  for (int i = 1; i <= p.k; ++i) {
    Rational alternating = Rational(binomial(p.k, i)) * (i % 2 == 0 ? 1 : -1);
    if (q.p(i) != rho * p.p(i) + (rho - 1) * alternating) return false;
  }
  return true;
}

// The `corrupt_q` hook shifts mass inside q; it exists as a negative control
// for the verification pipeline.
inline std::vector<IdentityCheckRow> run_identity_checks(int k_max,
                                                         bool corrupt_q = false) {
  if (k_max < 2) throw InvalidParameter("k_max must be >= 2");
  std::vector<IdentityCheckRow> rows;
  for (int k = 2; k <= k_max; ++k) {
    FrequencyDistribution p = make_p(k);
    FrequencyDistribution q = make_q(k);
    if (corrupt_q) q.p(1) += Rational(1, 997);
    IdentityCheckRow row;
    row.k = k;
    row.vandermonde = alternating_binomial_identity_check(k);
    Rational sum_p = 0, sum_q = 0;
    for (int i = 1; i <= k; ++i) {
      sum_p += p.p(i);
      sum_q += q.p(i);
    }
    row.sums_to_one = sum_p == 1 && sum_q == 1;
    row.p_k_zero = p.p(k) == 0;
    row.q_k_lower_bound = q.p(k) >= Rational(1, pow2(k));
    Rational rho = proportionality_factor(k);
    row.linear_relation = pq_linear_relation_holds(p, q, rho);
    ProportionalityWitness witness = verify_proportional_moments(p, q, k);
    row.proportional_moments = witness.valid && witness.rho == rho;
    rows.push_back(row);
  }
  return rows;
}

inline std::string render_identity_table(const std::vector<IdentityCheckRow>& rows) {
  std::ostringstream os;
  os << "  k  vandermonde  sums=1  p_k=0  q_k>=1/2^k  linear  moments  result\n";
  auto cell = [](bool ok) { return ok ? "ok" : "FAIL"; };
  for (const auto& row : rows) {
    char line[128];
    std::snprintf(line, sizeof(line), "%3d  %-11s  %-6s  %-5s  %-10s  %-6s  %-7s  %s\n",
                  row.k, cell(row.vandermonde), cell(row.sums_to_one),
                  cell(row.p_k_zero), cell(row.q_k_lower_bound),
                  cell(row.linear_relation), cell(row.proportional_moments),
                  row.all_pass() ? "PASS" : "FAIL");
    os << line;
  }
  return os.str();
}

// --- run manifests ----------------------------------------------------------

struct RunManifest {
  std::string command_line;
  std::uint64_t seed = 0;
  std::string config_snapshot;
  std::vector<std::string> outputs;
};

inline std::string render_manifest(const RunManifest& m, bool include_timestamp = true) {
  std::ostringstream os;
  os << "artifact_version=" << kArtifactVersion << "\n";
  os << "command=" << m.command_line << "\n";
  os << "seed=" << m.seed << "\n";
  os << "seed_derivation=splitmix64(master,stream,counter)\n";
  std::istringstream cfg(m.config_snapshot);
  std::string line;
  while (std::getline(cfg, line))
    if (!line.empty()) os << "config." << line << "\n";
  for (const auto& out : m.outputs) os << "output=" << out << "\n";
  if (include_timestamp) {
    std::time_t now = std::time(nullptr);
    char buf[64];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
    os << "generated_at=" << buf << "  # excluded from reproducibility\n";
  }
  return os.str();
}

inline void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream os(path);
  if (!os) throw IoError("cannot write file: " + path);
  os << content;
}

// --- separation experiment --------------------------------------------------

struct SeparationParams {
  int k = 3;
  std::vector<long long> n_list;
  long long trials = 200;
  std::uint64_t seed = 0;
  TesterConfig config;
  int jobs = 1;
};

struct SeparationCell {
  int k = 0;
  long long n = 0;
  std::uint64_t seed = 0;
  std::string model;
  long long budget = 0;  // 0 = unbudgeted (bidirectional)
  long long trials = 0;
  double accept_rate_A = 0.0;
  double reject_rate_B = 0.0;
  double mean_queries_A = 0.0;
  double mean_queries_B = 0.0;
};

struct SeparationOutcome {
  std::vector<SeparationCell> cells;
  std::vector<std::string> warnings;
  std::string csv_body;
};

inline std::string separation_csv_header() {
  return "k,n,seed,model,budget,trials,accept_rate_A,reject_rate_B,"
         "mean_queries_A,mean_queries_B,manifest\n";
}

// C_A- and C_B-derived k-star-freeness instances at each n; the bidirectional
// tester runs on the materialized graph, the unidirectional tester runs
// through the lazy reduction oracle at the two spec budgets.
inline SeparationOutcome run_separation(const SeparationParams& params,
                                        const std::string& manifest_ref) {
  if (params.k < 2) throw InvalidParameter("k must be >= 2");
  if (params.trials < 1) throw InvalidParameter("trials must be positive");
  const int k = params.k;
  const PatternDecomposition dec = decompose_and_index(make_k_star(k));
  const long long d = dec.pattern.max_degree();
  const FrequencyDistribution p = make_p(k);
  const FrequencyDistribution q = make_q(k);
  const Rational seq_eps = q.p(k) / k;  // farness lower bound of the C_B family
  const Rational graph_eps = distance_transfer(seq_eps, d, dec);
  const int jobs = resolve_jobs(params.jobs);

  SeparationOutcome outcome;
  struct TrialRecord {
    bool bidi_reject_A = false, bidi_reject_B = false;
    long long bidi_q_A = 0, bidi_q_B = 0;
    std::array<bool, 2> uni_reject_A{}, uni_reject_B{};
    std::array<long long, 2> uni_q_A{}, uni_q_B{};
  };

  for (long long n : params.n_list) {
    if (!is_realizable(p, n) || !is_realizable(q, n)) {
      long long step_p = realizable_step(p);
      long long step_q = realizable_step(q);
      long long step = step_p / std::gcd(step_p, step_q) * step_q;
      long long below = (n / step) * step;
      throw Unrealizable(n, below > 0 ? below : step, (n / step + 1) * step);
    }
    const std::uint64_t n_seed = mix_seed(params.seed, static_cast<std::uint64_t>(n));
    const ReducedIndexing idx{n, dec.n_comp, dec.n_center};
    const long long oracle_capacity = idx.total_vertices() * (d + 1);
    std::array<long long, 2> budgets{
        ceil_pow(n, (1.0 - 1.0 / k) / 2.0),
        static_cast<long long>(
            std::ceil(params.config.uni_budget_scale *
                      std::pow(static_cast<double>(n), 1.0 - 1.0 / k)))};
    for (auto& budget : budgets) {
      if (budget > oracle_capacity) {
        outcome.warnings.push_back("budget " + std::to_string(budget) +
                                   " exceeds total oracle size at n=" +
                                   std::to_string(n) + "; clamped to " +
                                   std::to_string(oracle_capacity));
        budget = oracle_capacity;
      }
    }

    std::vector<TrialRecord> records(static_cast<std::size_t>(params.trials));
    parallel_for(params.trials, jobs, [&](long long t) {
      TrialRecord rec;
      for (int family = 0; family < 2; ++family) {
        const FrequencyDistribution& dist = family == 0 ? p : q;
        const std::uint64_t family_tag = family == 0 ? 0xA000 : 0xB000;
        IntSequence seq = build_sequence_from_distribution(
            dist, n, derive_seed(n_seed, family_tag + 1, static_cast<std::uint64_t>(t)));
        const std::uint64_t instance_seed =
            derive_seed(n_seed, family_tag + 2, static_cast<std::uint64_t>(t));

        BoundedDigraph offline = build_offline(seq, dec, instance_seed);
        OracleSession<BoundedDigraph> bidi(offline, QueryModel::bidirectional);
        TesterVerdict verdict = bidirectional_hfree_tester(
            bidi, dec, graph_eps,
            derive_seed(n_seed, family_tag + 3, static_cast<std::uint64_t>(t)),
            params.config);
        (family == 0 ? rec.bidi_reject_A : rec.bidi_reject_B) = verdict.rejected();
        (family == 0 ? rec.bidi_q_A : rec.bidi_q_B) = verdict.queries_used;

        for (std::size_t bi = 0; bi < budgets.size(); ++bi) {
          SequenceAccess access(seq);
          ReductionOracle oracle(access, dec, instance_seed);
          OracleSession<ReductionOracle> uni(oracle, QueryModel::unidirectional);
          TesterVerdict uni_verdict = unidirectional_hfree_tester(
              uni, dec, budgets[bi],
              derive_seed(n_seed, family_tag + 4 + bi, static_cast<std::uint64_t>(t)),
              params.config);
          (family == 0 ? rec.uni_reject_A : rec.uni_reject_B)[bi] =
              uni_verdict.rejected();
          (family == 0 ? rec.uni_q_A : rec.uni_q_B)[bi] = uni_verdict.queries_used;
        }
      }
      records[static_cast<std::size_t>(t)] = rec;
    });

    auto make_cell = [&](const std::string& model, long long budget, auto reject_a,
                         auto reject_b, auto queries_a, auto queries_b) {
      SeparationCell cell;
      cell.k = k;
      cell.n = n;
      cell.seed = params.seed;
      cell.model = model;
      cell.budget = budget;
      cell.trials = params.trials;
      long long rej_a = 0, rej_b = 0, qa = 0, qb = 0;
      for (const auto& rec : records) {
        rej_a += reject_a(rec) ? 1 : 0;
        rej_b += reject_b(rec) ? 1 : 0;
        qa += queries_a(rec);
        qb += queries_b(rec);
      }
      double trials_d = static_cast<double>(params.trials);
      cell.accept_rate_A = 1.0 - static_cast<double>(rej_a) / trials_d;
      cell.reject_rate_B = static_cast<double>(rej_b) / trials_d;
      cell.mean_queries_A = static_cast<double>(qa) / trials_d;
      cell.mean_queries_B = static_cast<double>(qb) / trials_d;
      return cell;
    };

    outcome.cells.push_back(make_cell(
        "bidirectional", 0, [](const TrialRecord& r) { return r.bidi_reject_A; },
        [](const TrialRecord& r) { return r.bidi_reject_B; },
        [](const TrialRecord& r) { return r.bidi_q_A; },
        [](const TrialRecord& r) { return r.bidi_q_B; }));
    for (std::size_t bi = 0; bi < budgets.size(); ++bi) {
      outcome.cells.push_back(make_cell(
          "unidirectional", budgets[bi],
          [bi](const TrialRecord& r) { return r.uni_reject_A[bi]; },
          [bi](const TrialRecord& r) { return r.uni_reject_B[bi]; },
          [bi](const TrialRecord& r) { return r.uni_q_A[bi]; },
          [bi](const TrialRecord& r) { return r.uni_q_B[bi]; }));
    }
  }

  std::ostringstream csv;
  csv << separation_csv_header();
  for (const auto& cell : outcome.cells) {
    csv << cell.k << ',' << cell.n << ',' << cell.seed << ',' << cell.model << ','
        << cell.budget << ',' << cell.trials << ',' << format_double(cell.accept_rate_A)
        << ',' << format_double(cell.reject_rate_B) << ','
        << format_double(cell.mean_queries_A, 3) << ','
        << format_double(cell.mean_queries_B, 3) << ',' << manifest_ref << '\n';
  }
  outcome.csv_body = csv.str();
  return outcome;
}

// --- Poissonized histogram experiment ----------------------------------------

struct PoissonParams {
  int k = 3;
  long long n = 0;
  std::vector<long long> s_list;
  long long trials = 500;
  std::uint64_t seed = 0;
  TesterConfig config;
  int jobs = 1;
};

struct PoissonCell {
  int k = 0;
  long long n = 0;
  std::uint64_t seed = 0;
  long long s = 0;
  long long trials = 0;
  double accept_rate_A = 0.0;
  double accept_rate_B = 0.0;
  double advantage = 0.0;
  double mean_samples = 0.0;
};

struct PoissonOutcome {
  std::vector<PoissonCell> cells;
  std::string csv_body;
};

inline std::string poisson_csv_header() {
  return "k,n,seed,budget,trials,accept_rate_A,accept_rate_B,advantage,"
         "mean_samples,manifest\n";
}

inline PoissonOutcome run_poisson(const PoissonParams& params,
                                  const std::string& manifest_ref) {
  const FrequencyDistribution p = make_p(params.k);
  const FrequencyDistribution q = make_q(params.k);
  const int jobs = resolve_jobs(params.jobs);
  PoissonOutcome outcome;
  outcome.cells.assign(params.s_list.size(), {});
  parallel_for(static_cast<long long>(params.s_list.size()), jobs, [&](long long si) {
    long long s = params.s_list[static_cast<std::size_t>(si)];
    ExperimentStats stats = poisson_histogram_distinguisher(
        p, q, params.k, params.n, s, params.trials,
        derive_seed(params.seed, 0x9013, static_cast<std::uint64_t>(s)), params.config);
    PoissonCell cell;
    cell.k = params.k;
    cell.n = params.n;
    cell.seed = params.seed;
    cell.s = s;
    cell.trials = params.trials;
    cell.accept_rate_A = stats.accept_rate_on_yes;
    cell.accept_rate_B = 1.0 - stats.reject_rate_on_no;
    cell.advantage = stats.advantage();
    cell.mean_samples = stats.mean_queries;
    outcome.cells[static_cast<std::size_t>(si)] = cell;
  });

  std::ostringstream csv;
  csv << poisson_csv_header();
  for (const auto& cell : outcome.cells) {
    csv << cell.k << ',' << cell.n << ',' << cell.seed << ',' << cell.s << ','
        << cell.trials << ',' << format_double(cell.accept_rate_A) << ','
        << format_double(cell.accept_rate_B) << ',' << format_double(cell.advantage)
        << ',' << format_double(cell.mean_samples, 3) << ',' << manifest_ref << '\n';
  }
  outcome.csv_body = csv.str();
  return outcome;
}

}  // namespace proptest
