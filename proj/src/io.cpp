#include "tasnsc/io.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <numbers>
#include <sstream>

#include "tasnsc/error.hpp"

namespace tasnsc::io {

namespace fs = std::filesystem;

namespace {

constexpr double kDegPerRad = 180.0 / std::numbers::pi;

// Runs `fn`, turning JSON library exceptions into Error(kParse).
template <typename Fn>
auto parsing(const std::string& what, Fn&& fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::kParse, what + ": " + e.what());
  }
}

Vec2 vec_from_json(const Json& j) {
  if (!j.is_array() || j.size() != 2) {
    throw Error(ErrorCode::kParse, "expected a 2-element array");
  }
  return {j.at(0).get<double>(), j.at(1).get<double>()};
}

Json vec_to_json(const Vec2& v) { return Json::array({v.x(), v.y()}); }

Json kernel_to_json(const Kernel& k) {
  return {{"length_x", k.length_x},
          {"length_y", k.length_y},
          {"signal_sd", k.signal_sd},
          {"noise_sd", k.noise_sd}};
}

Kernel kernel_from_json(const Json& j, Kernel k = {}) {
  k.length_x = j.value("length_x", k.length_x);
  k.length_y = j.value("length_y", k.length_y);
  k.signal_sd = j.value("signal_sd", k.signal_sd);
  k.noise_sd = j.value("noise_sd", k.noise_sd);
  return k;
}

Json grid_to_json(const GridSpec& g) {
  return {{"x_min", g.x_min}, {"x_max", g.x_max}, {"y_min", g.y_min},
          {"y_max", g.y_max}, {"cell", g.cell},   {"channels", kChannelCount}};
}

GridSpec grid_from_json(const Json& j) {
  GridSpec g;
  g.x_min = j.at("x_min").get<double>();
  g.x_max = j.at("x_max").get<double>();
  g.y_min = j.at("y_min").get<double>();
  g.y_max = j.at("y_max").get<double>();
  g.cell = j.at("cell").get<double>();
  g.validate();
  return g;
}

std::ifstream open_in(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot open '" + path.string() + "'");
  return in;
}

std::ofstream open_out(const fs::path& path) {
  std::ofstream out(path);
  if (!out) {
    throw Error(ErrorCode::kIo, "cannot write '" + path.string() + "'");
  }
  return out;
}

}  // namespace

Json read_json_file(const fs::path& path) {
  auto in = open_in(path);
  return parsing("'" + path.string() + "'", [&] { return Json::parse(in); });
}

void write_text_file(const fs::path& path, const std::string& text) {
  auto out = open_out(path);
  out << text;
  if (!out) throw Error(ErrorCode::kIo, "write failed for '" + path.string() + "'");
}

CurbsideFrame frame_from_json(const Json& j) {
  return parsing("frame", [&] {
    return CurbsideFrame::from_curbs(vec_from_json(j.at("origin")),
                                     vec_from_json(j.at("curb1")),
                                     vec_from_json(j.at("curb2")));
  });
}

Json frame_to_json(const CurbsideFrame& frame) {
  return {{"origin", vec_to_json(frame.origin())},
          {"curb1", vec_to_json(frame.e1())},
          {"curb2", vec_to_json(frame.e2())}};
}

CurbsideFrame load_frame(const fs::path& path) {
  return frame_from_json(read_json_file(path));
}

Trajectory trajectory_from_json(const Json& j) {
  return parsing("trajectory", [&] {
    std::vector<TimedPoint> pts;
    for (const auto& p : j.at("points")) {
      if (!p.is_array() || p.size() != 3) {
        throw Error(ErrorCode::kParse, "trajectory points must be [t,x,y]");
      }
      pts.push_back({p[0].get<double>(), {p[1].get<double>(), p[2].get<double>()}});
    }
    Trajectory t(j.at("id").get<std::string>(), j.at("dt").get<double>(),
                 std::move(pts), j.value("intent", std::string{}));
    t.validate();
    return t;
  });
}

Json trajectory_to_json(const Trajectory& traj) {
  Json pts = Json::array();
  for (const auto& p : traj.points()) {
    pts.push_back(Json::array({p.t, p.pos.x(), p.pos.y()}));
  }
  Json j = {{"id", traj.id()}, {"dt", traj.dt()}, {"points", std::move(pts)}};
  if (!traj.label().empty()) j["intent"] = traj.label();
  return j;
}

Dataset read_dataset(std::istream& in) {
  Dataset data;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const Json j = parsing("dataset line " + std::to_string(lineno),
                           [&] { return Json::parse(line); });
    data.trajectories.push_back(trajectory_from_json(j));
  }
  if (!data.empty()) data.dt();
  return data;
}

Dataset read_dataset(const fs::path& path) {
  auto in = open_in(path);
  return read_dataset(in);
}

void write_dataset(std::ostream& out, const Dataset& data) {
  for (const auto& t : data.trajectories) out << trajectory_to_json(t).dump() << '\n';
}

void write_dataset(const fs::path& path, const Dataset& data) {
  auto out = open_out(path);
  write_dataset(out, data);
  if (!out) throw Error(ErrorCode::kIo, "write failed for '" + path.string() + "'");
}

SceneSpec scene_from_json(const Json& j) {
  return parsing("scene", [&] {
    SceneSpec s;
    s.name = j.value("name", s.name);
    if (j.contains("corner")) s.corner = vec_from_json(j.at("corner"));
    s.heading = j.value("heading_deg", s.heading * kDegPerRad) / kDegPerRad;
    s.alpha = j.value("alpha_deg", s.alpha * kDegPerRad) / kDegPerRad;
    s.sidewalk_offset = j.value("sidewalk_offset", s.sidewalk_offset);
    s.lane_spread = j.value("lane_spread", s.lane_spread);
    if (j.contains("crosswalks")) {
      const auto& c = j.at("crosswalks");
      if (c.contains("straight") && !c.at("straight").is_null()) {
        s.crosswalk_straight = vec_from_json(c.at("straight"));
      }
      if (c.contains("left") && !c.at("left").is_null()) {
        s.crosswalk_left = vec_from_json(c.at("left"));
      }
    }
    if (j.contains("intent_mix")) {
      const auto& m = j.at("intent_mix");
      s.mix.straight = m.value("straight", 0.0);
      s.mix.cross_left = m.value("cross-left", 0.0);
      s.mix.cross_right = m.value("cross-right", 0.0);
    }
    s.speed_mean = j.value("speed_mean", s.speed_mean);
    s.speed_sd = j.value("speed_sd", s.speed_sd);
    s.noise_sd = j.value("noise_sd", s.noise_sd);
    if (j.contains("turn_time")) {
      const Vec2 a = vec_from_json(j.at("turn_time"));
      s.turn_time_min = a.x();
      s.turn_time_max = a.y();
    }
    s.duration = j.value("duration", s.duration);
    s.blend = j.value("blend", s.blend);
    s.seed = j.value("seed", s.seed);
    s.validate();
    return s;
  });
}

Json scene_to_json(const SceneSpec& s) {
  Json crosswalks = {{"straight", nullptr}, {"left", nullptr}};
  if (s.crosswalk_straight) crosswalks["straight"] = vec_to_json(*s.crosswalk_straight);
  if (s.crosswalk_left) crosswalks["left"] = vec_to_json(*s.crosswalk_left);
  return {{"name", s.name},
          {"corner", vec_to_json(s.corner)},
          {"heading_deg", s.heading * kDegPerRad},
          {"alpha_deg", s.alpha * kDegPerRad},
          {"sidewalk_offset", s.sidewalk_offset},
          {"lane_spread", s.lane_spread},
          {"crosswalks", crosswalks},
          {"intent_mix",
           {{"straight", s.mix.straight},
            {"cross-left", s.mix.cross_left},
            {"cross-right", s.mix.cross_right}}},
          {"speed_mean", s.speed_mean},
          {"speed_sd", s.speed_sd},
          {"noise_sd", s.noise_sd},
          {"turn_time", Json::array({s.turn_time_min, s.turn_time_max})},
          {"duration", s.duration},
          {"blend", s.blend},
          {"seed", s.seed}};
}

SceneSpec load_scene(const fs::path& path) {
  return scene_from_json(read_json_file(path));
}

PipelineConfig config_from_json(const Json& j, PipelineConfig c) {
  return parsing("pipeline config", [&] {
    if (j.contains("mode")) c.mode = parse_mode(j.at("mode").get<std::string>());
    c.dt = j.value("dt", c.dt);
    c.t_obs = j.value("t_obs", c.t_obs);
    c.t_pred = j.value("t_pred", c.t_pred);
    c.cell = j.value("cell", c.cell);
    c.grid_margin = j.value("grid_margin", c.grid_margin);
    if (j.contains("grid")) {
      if (j.at("grid").is_null()) {
        c.grid.reset();
      } else {
        c.grid = grid_from_json(j.at("grid"));
      }
    }
    c.dictionary.atoms = j.value("K", c.dictionary.atoms);
    c.dictionary.lambda = j.value("lambda", c.dictionary.lambda);
    c.dictionary.iterations = j.value("iterations", c.dictionary.iterations);
    c.dictionary.seed = j.value("seed", c.dictionary.seed);
    c.dictionary.code_passes = j.value("code_passes", c.dictionary.code_passes);
    c.min_segment = j.value("min_segment", c.min_segment);
    if (j.contains("kernel")) c.kernel = kernel_from_json(j.at("kernel"), c.kernel);
    c.top_m = j.value("top_m", c.top_m);
    c.max_pattern_samples = j.value("max_pattern_samples", c.max_pattern_samples);
    c.validate();
    return c;
  });
}

Json config_to_json(const PipelineConfig& c) {
  return {{"mode", to_string(c.mode)},
          {"dt", c.dt},
          {"t_obs", c.t_obs},
          {"t_pred", c.t_pred},
          {"cell", c.cell},
          {"grid_margin", c.grid_margin},
          {"grid", c.grid ? grid_to_json(*c.grid) : Json(nullptr)},
          {"K", c.dictionary.atoms},
          {"lambda", c.dictionary.lambda},
          {"iterations", c.dictionary.iterations},
          {"seed", c.dictionary.seed},
          {"code_passes", c.dictionary.code_passes},
          {"min_segment", c.min_segment},
          {"kernel", kernel_to_json(c.kernel)},
          {"top_m", c.top_m},
          {"max_pattern_samples", c.max_pattern_samples}};
}

Json model_to_json(const TasnscModel& m) {
  Json atoms = Json::array();
  for (Eigen::Index k = 0; k < m.dictionary.size(); ++k) {
    const Eigen::VectorXd col = m.dictionary.atoms.col(k);
    atoms.push_back(std::vector<double>(col.data(), col.data() + col.size()));
  }
  Json transitions = Json::array();
  for (int i = 0; i < m.transitions.size(); ++i) {
    Json row = Json::array();
    for (int j = 0; j < m.transitions.size(); ++j) row.push_back(m.transitions(i, j));
    transitions.push_back(std::move(row));
  }
  Json patterns = Json::array();
  for (const auto& p : m.patterns) {
    Json inputs = Json::array();
    for (const auto& x : p.gp_x.inputs()) inputs.push_back(vec_to_json(x));
    const auto& tx = p.gp_x.targets();
    const auto& ty = p.gp_y.targets();
    patterns.push_back({{"from", p.from},
                        {"to", p.to},
                        {"prior_weight", p.prior_weight},
                        {"kernel", kernel_to_json(p.gp_x.kernel())},
                        {"inputs", std::move(inputs)},
                        {"targets_x", std::vector<double>(tx.data(), tx.data() + tx.size())},
                        {"targets_y", std::vector<double>(ty.data(), ty.data() + ty.size())}});
  }
  return {{"format", "tasnsc-model"},
          {"version", kModelVersion},
          {"mode", to_string(m.config.mode)},
          {"frame", frame_to_json(m.training_frame)},
          {"config", config_to_json(m.config)},
          {"grid", grid_to_json(m.grid)},
          {"dictionary",
           {{"K", m.dictionary.size()},
            {"dim", m.dictionary.dim()},
            {"lambda", m.config.dictionary.lambda},
            {"seed", m.config.dictionary.seed},
            {"atoms", std::move(atoms)}}},
          {"transitions", std::move(transitions)},
          {"patterns", std::move(patterns)},
          {"final_objective", m.final_objective},
          {"skipped_trajectories", m.skipped_trajectories}};
}

TasnscModel model_from_json(const Json& j) {
  return parsing("model", [&] {
    if (!j.contains("version")) {
      throw Error(ErrorCode::kParse, "model file has no version field");
    }
    const int version = j.at("version").get<int>();
    if (version != kModelVersion) {
      throw Error(ErrorCode::kParse,
                  "unsupported model version " + std::to_string(version));
    }
    TasnscModel m;
    m.config = config_from_json(j.at("config"));
    m.config.mode = parse_mode(j.at("mode").get<std::string>());
    m.training_frame = frame_from_json(j.at("frame"));
    m.grid = grid_from_json(j.at("grid"));

    const auto& d = j.at("dictionary");
    const auto k = d.at("K").get<Eigen::Index>();
    const auto dim = d.at("dim").get<Eigen::Index>();
    if (dim != m.grid.dim()) {
      throw Error(ErrorCode::kDimensionMismatch,
                  "dictionary dimension does not match grid");
    }
    const auto& atoms = d.at("atoms");
    if (static_cast<Eigen::Index>(atoms.size()) != k) {
      throw Error(ErrorCode::kParse, "atom count does not match K");
    }
    m.dictionary.atoms.resize(dim, k);
    for (Eigen::Index a = 0; a < k; ++a) {
      const auto values = atoms.at(static_cast<std::size_t>(a)).get<std::vector<double>>();
      if (static_cast<Eigen::Index>(values.size()) != dim) {
        throw Error(ErrorCode::kParse, "atom length does not match dim");
      }
      m.dictionary.atoms.col(a) = Eigen::Map<const Eigen::VectorXd>(values.data(), dim);
    }

    const auto& t = j.at("transitions");
    Eigen::MatrixXi counts = Eigen::MatrixXi::Zero(k, k);
    for (Eigen::Index r = 0; r < k; ++r) {
      for (Eigen::Index c = 0; c < k; ++c) {
        counts(r, c) = t.at(static_cast<std::size_t>(r)).at(static_cast<std::size_t>(c)).get<int>();
      }
    }
    m.transitions = TransitionMatrix(std::move(counts));

    for (const auto& p : j.at("patterns")) {
      const Kernel kernel = kernel_from_json(p.at("kernel"));
      std::vector<FlowSample> samples;
      const auto& inputs = p.at("inputs");
      const auto tx = p.at("targets_x").get<std::vector<double>>();
      const auto ty = p.at("targets_y").get<std::vector<double>>();
      if (tx.size() != inputs.size() || ty.size() != inputs.size()) {
        throw Error(ErrorCode::kParse, "pattern inputs and targets differ");
      }
      for (std::size_t i = 0; i < inputs.size(); ++i) {
        samples.push_back({vec_from_json(inputs[i]), {tx[i], ty[i]}});
      }
      m.patterns.push_back(fit_pattern(p.at("from").get<int>(), p.at("to").get<int>(),
                                       samples, kernel,
                                       p.at("prior_weight").get<double>()));
    }
    m.final_objective = j.value("final_objective", 0.0);
    m.skipped_trajectories = j.value("skipped_trajectories", std::size_t{0});
    return m;
  });
}

void save_model(const fs::path& path, const TasnscModel& model) {
  write_text_file(path, model_to_json(model).dump() + "\n");
}

TasnscModel load_model(const fs::path& path) {
  return model_from_json(read_json_file(path));
}

Json report_to_json(const EvalReport& r) {
  Json rows = Json::array();
  for (const auto& row : r.rows) {
    rows.push_back({{"id", row.id},
                    {"intent", row.label},
                    {"mhd", row.mhd},
                    {"correct_weight", row.correct_weight},
                    {"top_deviation_deg", row.top_deviation},
                    {"top_pattern", row.top_pattern},
                    {"top_likelihood", row.scored.predictions.top().likelihood},
                    {"candidates", row.scored.predictions.candidates.size()},
                    {"predict_time", row.predict_time}});
  }
  return {{"algorithm", r.mode == "tasnsc" ? "TASNSC" : "ASNSC"},
          {"mode", r.mode},
          {"train_in", r.train_in},
          {"test_in", r.test_in},
          {"classification_accuracy", r.classification_accuracy},
          {"mean_mhd", r.mean_mhd},
          {"mean_predict_time", r.mean_predict_time},
          {"threshold_deg", r.threshold_deg},
          {"rows", std::move(rows)}};
}

std::string format_table(std::span<const EvalReport> reports) {
  std::ostringstream out;
  out << std::left << std::setw(10) << "Algorithm" << std::right
      << std::setw(26) << "Classification Acc. (%)" << std::setw(10)
      << "MHD (m)" << std::setw(12) << "Time (sec)" << std::setw(10)
      << "Train In" << std::setw(9) << "Test In" << '\n';
  for (const auto& r : reports) {
    out << std::left << std::setw(10) << (r.mode == "tasnsc" ? "TASNSC" : "ASNSC")
        << std::right << std::fixed << std::setw(26) << std::setprecision(2)
        << r.classification_accuracy << std::setw(10) << std::setprecision(3)
        << r.mean_mhd << std::setw(12) << std::setprecision(4)
        << r.mean_predict_time << std::setw(10) << r.train_in << std::setw(9)
        << r.test_in << '\n';
  }
  return out.str();
}

namespace {

std::string safe_name(const std::string& id) {
  std::string out = id;
  for (char& c : out) {
    const bool ok = std::isalnum(static_cast<unsigned char>(c)) || c == '-' ||
                    c == '_' || c == '.';
    if (!ok) c = '_';
  }
  return out.empty() ? "trajectory" : out;
}

void csv_rows(std::ostream& out, const std::string& kind, int candidate,
              double likelihood, const Trajectory& t) {
  for (const auto& p : t.points()) {
    out << kind << ',' << candidate << ',' << likelihood << ',' << p.t << ','
        << p.pos.x() << ',' << p.pos.y() << '\n';
  }
}

}  // namespace

void write_plot_csv(const fs::path& dir, const EvalReport& report) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error(ErrorCode::kIo, "cannot create '" + dir.string() + "'");
  for (const auto& row : report.rows) {
    auto out = open_out(dir / (safe_name(row.id) + ".csv"));
    out << std::setprecision(10);
    out << "kind,candidate,likelihood,t,x,y\n";
    csv_rows(out, "observed", -1, 1.0, row.observed);
    csv_rows(out, "truth", -1, 1.0, row.scored.truth);
    int idx = 0;
    for (const auto& c : row.scored.predictions.candidates) {
      csv_rows(out, "candidate", idx++, c.likelihood, c.trajectory);
    }
  }
}

}  // namespace tasnsc::io
