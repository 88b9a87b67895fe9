// Command-line front end: generate, train, evaluate, compare.
//
// Exit codes: 0 success, 2 configuration or usage error, 3 pipeline failure.

#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "tasnsc/error.hpp"
#include "tasnsc/io.hpp"
#include "tasnsc/metrics.hpp"
#include "tasnsc/predictor.hpp"
#include "tasnsc/synthgen.hpp"

namespace fs = std::filesystem;
using namespace tasnsc;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitPipeline = 3;

struct PipelineFlags {
  std::string config_path;
  std::optional<std::string> mode;
  std::optional<int> k;
  std::optional<double> lambda;
  std::optional<std::uint64_t> seed;
  std::optional<int> top_m;
};

void add_pipeline_flags(CLI::App* cmd, PipelineFlags& f, bool with_mode) {
  cmd->add_option("--config", f.config_path, "Pipeline config JSON")
      ->check(CLI::ExistingFile);
  if (with_mode) {
    cmd->add_option("--mode", f.mode, "tasnsc | baseline");
  }
  cmd->add_option("--k", f.k, "Dictionary atom count");
  cmd->add_option("--lambda", f.lambda, "Sparsity weight");
  cmd->add_option("--seed", f.seed, "Dictionary seed");
  cmd->add_option("--top-m", f.top_m, "Candidates kept per prediction");
}

// Defaults, then the config file, then flags.
PipelineConfig resolve(const PipelineFlags& f) {
  PipelineConfig c;
  if (!f.config_path.empty()) c = io::config_from_json(io::read_json_file(f.config_path));
  if (f.mode) c.mode = parse_mode(*f.mode);
  if (f.k) c.dictionary.atoms = *f.k;
  if (f.lambda) c.dictionary.lambda = *f.lambda;
  if (f.seed) c.dictionary.seed = *f.seed;
  if (f.top_m) c.top_m = static_cast<std::size_t>(*f.top_m);
  c.validate();
  return c;
}

double resolve_threshold(const PipelineFlags& f, std::optional<double> flag) {
  double t = 40.0;
  if (!f.config_path.empty()) {
    t = io::read_json_file(f.config_path).value("threshold_deg", t);
  }
  if (flag) t = *flag;
  if (!(t > 0.0 && t <= 180.0)) {
    throw Error(ErrorCode::kInvalidArgument, "threshold must lie in (0, 180]");
  }
  return t;
}

std::string stem(const std::string& path) { return fs::path(path).stem().string(); }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Transferable pedestrian trajectory prediction at intersections"};
  app.require_subcommand(1);

  // generate
  auto* gen = app.add_subcommand("generate", "Write a synthetic dataset for a scene");
  std::string gen_scene, gen_out;
  int gen_n = 0;
  double gen_dt = 0.5;
  std::optional<std::uint64_t> gen_seed;
  gen->add_option("--scene", gen_scene, "Scene config JSON")->required();
  gen->add_option("--n", gen_n, "Number of trajectories")->required();
  gen->add_option("--out", gen_out, "Output dataset (JSON lines)")->required();
  gen->add_option("--seed", gen_seed, "Overrides the scene seed");
  gen->add_option("--dt", gen_dt, "Sampling step in seconds");

  // train
  auto* train_cmd = app.add_subcommand("train", "Learn a model from a dataset");
  std::string tr_data, tr_frame, tr_out;
  PipelineFlags tr_flags;
  train_cmd->add_option("--data", tr_data, "Training dataset")->required();
  train_cmd->add_option("--frame", tr_frame, "Curbside frame JSON")->required();
  train_cmd->add_option("--out", tr_out, "Model output")->required();
  add_pipeline_flags(train_cmd, tr_flags, true);

  // evaluate
  auto* eval_cmd = app.add_subcommand("evaluate", "Score a model on a test set");
  std::string ev_model, ev_data, ev_frame, ev_report, ev_plots;
  std::optional<double> ev_threshold;
  bool ev_weighted = false;
  eval_cmd->add_option("--model", ev_model, "Model file")->required();
  eval_cmd->add_option("--data", ev_data, "Test dataset")->required();
  eval_cmd->add_option("--frame", ev_frame, "Curbside frame of the test intersection")
      ->required();
  eval_cmd->add_option("--report", ev_report, "Report JSON output")->required();
  eval_cmd->add_option("--threshold", ev_threshold, "Correctness threshold (deg)");
  eval_cmd->add_option("--emit-plots", ev_plots, "Directory for per-trajectory CSV");
  eval_cmd->add_flag("--weighted-mhd", ev_weighted,
                     "Likelihood-weighted MHD instead of top-1");

  // compare
  auto* cmp = app.add_subcommand("compare", "Run the A/B train/test grid");
  std::string train_a, test_a, train_b, test_b, cmp_out;
  std::vector<std::string> frames;
  PipelineFlags cmp_flags;
  std::optional<double> cmp_threshold;
  cmp->add_option("--train-a", train_a, "Training set, intersection A")->required();
  cmp->add_option("--test-a", test_a, "Test set, intersection A")->required();
  cmp->add_option("--train-b", train_b, "Training set, intersection B")->required();
  cmp->add_option("--test-b", test_b, "Test set, intersection B")->required();
  cmp->add_option("--frames", frames, "Frame JSON for A then B")->expected(2)->required();
  cmp->add_option("--out", cmp_out, "Combined report JSON")->required();
  cmp->add_option("--threshold", cmp_threshold, "Correctness threshold (deg)");
  add_pipeline_flags(cmp, cmp_flags, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  try {
    if (gen->parsed()) {
      SceneSpec scene = io::load_scene(gen_scene);
      if (gen_seed) scene.seed = *gen_seed;
      const Dataset data = generate(scene, gen_n, gen_dt);
      io::write_dataset(gen_out, data);
      std::cout << "wrote " << data.size() << " trajectories to " << gen_out << '\n';
    } else if (train_cmd->parsed()) {
      const PipelineConfig cfg = resolve(tr_flags);
      const CurbsideFrame frame = io::load_frame(tr_frame);
      const Dataset data = io::read_dataset(tr_data);
      const TasnscModel model = train(data, frame, cfg);
      io::save_model(tr_out, model);
      std::cout << "mode: " << to_string(cfg.mode) << '\n'
                << "dictionary size: " << model.dictionary.size() << '\n'
                << "patterns: " << model.patterns.size() << '\n'
                << "final objective: " << model.final_objective << '\n';
    } else if (eval_cmd->parsed()) {
      const TasnscModel model = io::load_model(ev_model);
      const CurbsideFrame frame = io::load_frame(ev_frame);
      const Dataset data = io::read_dataset(ev_data);
      EvalOptions opts;
      opts.threshold_deg = resolve_threshold({}, ev_threshold);
      opts.weighted_mhd = ev_weighted;
      EvalReport report = evaluate(model, data, frame, opts);
      report.train_in = stem(ev_model);
      report.test_in = stem(ev_data);
      io::write_text_file(ev_report, io::report_to_json(report).dump(2) + "\n");
      const std::string table = io::format_table(std::span(&report, 1));
      io::write_text_file(ev_report + ".txt", table);
      std::cout << table;
      if (!ev_plots.empty()) io::write_plot_csv(ev_plots, report);
    } else if (cmp->parsed()) {
      const PipelineConfig base = resolve(cmp_flags);
      EvalOptions opts;
      opts.threshold_deg = resolve_threshold(cmp_flags, cmp_threshold);
      CompareInputs in;
      in.frame_a = io::load_frame(frames.at(0));
      in.frame_b = io::load_frame(frames.at(1));
      in.train_a = io::read_dataset(train_a);
      in.test_a = io::read_dataset(test_a);
      in.train_b = io::read_dataset(train_b);
      in.test_b = io::read_dataset(test_b);
      const std::vector<EvalReport> rows = compare_grid(in, base, opts);

      io::Json out = {{"threshold_deg", opts.threshold_deg},
                      {"config", io::config_to_json(base)},
                      {"rows", io::Json::array()}};
      for (const auto& r : rows) out["rows"].push_back(io::report_to_json(r));
      io::write_text_file(cmp_out, out.dump(2) + "\n");
      std::cout << io::format_table(rows);
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return e.is_configuration() ? kExitConfig : kExitPipeline;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitPipeline;
  }
  return kExitOk;
}
