// hamrec: recover k-local chain Hamiltonians from degenerate steady states
// and predict when recovery is possible.
//
//   hamrec recover --model h2 -L 4 --profile 2 --seed 7
//   hamrec sweep   --model h3 --profile 3 --lmin 3 --lmax 10 --out sweep.csv
//   hamrec table1  --lmax 10 --seeds 5
//   hamrec predict --model h2 --profile 2,2 --lmax 12

#include <chrono>
#include <ctime>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "hamrec/hoe.hpp"
#include "hamrec/io.hpp"
#include "hamrec/pipeline.hpp"
#include "hamrec/sweep.hpp"

extern "C" void openblas_set_num_threads(int);

namespace {

using namespace hamrec;

std::vector<int> parse_profile(const std::string& s, int length) {
  if (s == "rho-me" || s == "me") return {2, 2};
  if (s == "full") {
    if (length < 1) throw CLI::ValidationError("--profile full requires -L");
    return {1 << length};
  }
  std::vector<int> q;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    const int v = std::stoi(tok);
    if (v < 1) throw CLI::ValidationError("profile entries must be >= 1");
    q.push_back(v);
  }
  if (q.empty()) throw CLI::ValidationError("empty profile");
  return q;
}

struct OutputSink {
  std::string path;
  std::ofstream file;
  std::ostream& stream() {
    if (path.empty()) return std::cout;
    if (!file.is_open()) {
      file.open(path);
      if (!file) throw std::runtime_error("cannot open output file: " + path);
    }
    return file;
  }
};

void write_header_comment(std::ostream& os, bool reproducible) {
  if (reproducible) return;
  const std::time_t now =
      std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  char buf[64];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%S", std::gmtime(&now));
  os << "# generated " << buf << "Z\n";
}

int cmd_recover(const std::string& model, int length, const std::string& profile,
                const std::string& spec_path, std::uint64_t seed) {
  const ModelKind kind = model_from_name(model);
  TrialOptions opt;
  std::vector<int> q;
  if (!spec_path.empty()) {
    std::ifstream in(spec_path);
    if (!in) throw std::runtime_error("cannot read spec file: " + spec_path);
    nlohmann::json j;
    in >> j;
    opt.spec = steady_state_spec_from_json(j);
    opt.use_spec = true;
  } else {
    q = parse_profile(profile, length);
  }
  const TrialResult r = run_trial(kind, length, q, seed, opt);
  std::cout << to_json(r).dump(2) << "\n";
  return 0;  // recovery failure is data, not an error
}

int cmd_sweep(const SweepConfig& cfg, const std::string& format,
              const std::string& out, bool reproducible) {
  const std::vector<SweepRow> rows = run_sweep(cfg);
  OutputSink sink{out};
  std::ostream& os = sink.stream();
  if (format == "json") {
    nlohmann::json j = nlohmann::json::array();
    for (const auto& r : rows) j.push_back(to_json(r));
    os << j.dump(2) << "\n";
  } else {
    write_header_comment(os, reproducible);
    os << sweep_csv_header() << "\n";
    for (const auto& r : rows) os << sweep_csv_row(r) << "\n";
  }
  return 0;
}

int hoe_rank_majority(ModelKind kind, int length, int seeds,
                      std::uint64_t base_seed) {
  std::map<int, int> votes;
  const TermBasis basis(kind, length);
  for (int s = 0; s < seeds; ++s) {
    const CoefficientVector a = random_instance(kind, length, base_seed + s);
    const Mat h = assemble_dense(basis, a);
    const SpectralDecomposition eig = eigendecompose(h);
    auto [rho, truth] = build_steady_state(ladder_spec({2, 2}), eig);
    (void)truth;
    const WeightBlocks blocks = cluster_weights(rho);
    ++votes[hoe_rank(hoe_gram(basis, blocks))];
  }
  int best = 0, best_count = -1;
  for (auto [r, c] : votes)
    if (c > best_count) best = r, best_count = c;
  return best;
}

int cmd_table1(int l_max, int seeds, std::uint64_t base_seed,
               const std::string& format, const std::string& out,
               bool reproducible) {
  struct Row {
    int length;
    std::int64_t s;
    int n_h2, r_h2;
    bool has_h3 = false;
    int n_h3 = 0, r_h3 = 0;
  };
  std::vector<Row> rows;
  for (int length = 2; length <= l_max; ++length) {
    Row row{};
    row.length = length;
    row.s = predicted_lie_count({{2, 2}, length});
    row.n_h2 = term_count(ModelKind::H2, length);
    row.r_h2 = hoe_rank_majority(ModelKind::H2, length, seeds, base_seed);
    if (length >= 3) {
      row.has_h3 = true;
      row.n_h3 = term_count(ModelKind::H3, length);
      row.r_h3 = hoe_rank_majority(ModelKind::H3, length, seeds, base_seed);
    }
    rows.push_back(row);
  }
  OutputSink sink{out};
  std::ostream& os = sink.stream();
  if (format == "json") {
    nlohmann::json j = nlohmann::json::array();
    for (const auto& r : rows) {
      nlohmann::json jr{{"L", r.length}, {"S", r.s},
                        {"N_h2", r.n_h2}, {"r_h2", r.r_h2}};
      if (r.has_h3) {
        jr["N_h3"] = r.n_h3;
        jr["r_h3"] = r.r_h3;
      } else {
        jr["N_h3"] = nullptr;
        jr["r_h3"] = nullptr;
      }
      j.push_back(jr);
    }
    os << j.dump(2) << "\n";
  } else {
    write_header_comment(os, reproducible);
    os << "L,S,N_h2,r_h2,N_h3,r_h3\n";
    for (const auto& r : rows) {
      os << r.length << ',' << r.s << ',' << r.n_h2 << ',' << r.r_h2 << ',';
      if (r.has_h3)
        os << r.n_h3 << ',' << r.r_h3;
      else
        os << ',';
      os << "\n";
    }
  }
  return 0;
}

int cmd_predict(const std::string& model, const std::string& profile, int l_max,
                const std::string& format, const std::string& out,
                bool reproducible) {
  const ModelKind kind = model_from_name(model);
  OutputSink sink{out};
  std::ostream& os = sink.stream();
  std::optional<int> l_c;
  struct Row {
    int length;
    std::int64_t s;
    int n;
    bool recoverable;
  };
  std::vector<Row> rows;
  for (int length = model_min_length(kind); length <= l_max; ++length) {
    const std::vector<int> q = parse_profile(profile, length);
    std::int64_t total = 0;
    for (int qm : q) total += qm;
    if (total > (std::int64_t{1} << length)) continue;
    const std::int64_t s = predicted_lie_count({q, length});
    const int n = term_count(kind, length);
    const bool rec = s >= n - 1;
    if (rec && !l_c) l_c = length;
    rows.push_back({length, s, n, rec});
  }
  if (format == "json") {
    nlohmann::json j;
    j["rows"] = nlohmann::json::array();
    for (const auto& r : rows)
      j["rows"].push_back({{"L", r.length}, {"S", r.s}, {"N", r.n},
                           {"recoverable", r.recoverable}});
    if (l_c)
      j["L_c"] = *l_c;
    else
      j["L_c"] = nullptr;
    os << j.dump(2) << "\n";
  } else {
    write_header_comment(os, reproducible);
    os << "L,S,N,recoverable\n";
    for (const auto& r : rows)
      os << r.length << ',' << r.s << ',' << r.n << ','
         << (r.recoverable ? 1 : 0) << "\n";
    if (l_c)
      os << "# L_c = " << *l_c << "\n";
    else
      os << "# L_c = none <= " << l_max << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Hamiltonian recovery from degenerate steady states"};
  app.require_subcommand(1);

  std::string model = "h2", profile = "2", format = "csv", out, spec_path;
  int length = 4, l_min = 2, l_max = 10, trials = 200, seeds = 5, workers = 0;
  std::uint64_t seed = 1;
  double threshold = 1e-8;
  bool reproducible = false;

  auto* rec = app.add_subcommand("recover", "single recovery, JSON report");
  rec->add_option("--model", model)->check(CLI::IsMember({"h2", "h3"}));
  rec->add_option("-L,--length", length)->required();
  rec->add_option("--profile", profile);
  rec->add_option("--spec", spec_path, "steady-state spec JSON file");
  rec->add_option("--seed", seed);

  auto* sw = app.add_subcommand("sweep", "L-sweep, aggregated CSV/JSON");
  sw->add_option("--model", model)->check(CLI::IsMember({"h2", "h3"}));
  sw->add_option("--profile", profile);
  sw->add_option("--lmin", l_min);
  sw->add_option("--lmax", l_max);
  sw->add_option("--trials", trials);
  sw->add_option("--seed", seed, "base seed; trial t uses seed+t");
  sw->add_option("--threshold", threshold, "success threshold on delta");
  sw->add_option("--workers", workers);
  sw->add_option("--format", format)->check(CLI::IsMember({"csv", "json"}));
  sw->add_option("--out", out);
  sw->add_flag("--reproducible", reproducible, "suppress timestamp header");

  auto* tb = app.add_subcommand("table1", "S/N/r comparison table");
  tb->add_option("--lmax", l_max);
  tb->add_option("--seeds", seeds, "random seeds per cell, majority vote");
  tb->add_option("--seed", seed);
  tb->add_option("--format", format)->check(CLI::IsMember({"csv", "json"}));
  tb->add_option("--out", out);
  tb->add_flag("--reproducible", reproducible);

  auto* pr = app.add_subcommand("predict", "pure-arithmetic recoverability");
  pr->add_option("--model", model)->check(CLI::IsMember({"h2", "h3"}));
  pr->add_option("--profile", profile);
  pr->add_option("--lmax", l_max);
  pr->add_option("--format", format)->check(CLI::IsMember({"csv", "json"}));
  pr->add_option("--out", out);
  pr->add_flag("--reproducible", reproducible);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;  // usage error
  }

  try {
    if (rec->parsed()) return cmd_recover(model, length, profile, spec_path, seed);
    if (sw->parsed()) {
      if (workers != 1) openblas_set_num_threads(1);
      hamrec::SweepConfig cfg;
      cfg.kind = hamrec::model_from_name(model);
      cfg.profile = parse_profile(profile, 0);
      cfg.l_min = l_min;
      cfg.l_max = l_max;
      cfg.trials = trials;
      cfg.base_seed = seed;
      cfg.success_threshold = threshold;
      cfg.workers = workers;
      return cmd_sweep(cfg, format, out, reproducible);
    }
    if (tb->parsed())
      return cmd_table1(l_max, seeds, seed, format, out, reproducible);
    if (pr->parsed())
      return cmd_predict(model, profile, l_max, format, out, reproducible);
  } catch (const CLI::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 3;
  }
  return 2;
}
