#include <filesystem>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

#include "tasnsc/error.hpp"
#include "tasnsc/io.hpp"
#include "test_support.hpp"

namespace tasnsc {
namespace {

using io::Json;

ErrorCode code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no tasnsc::Error thrown";
  return ErrorCode::kNoPattern;
}

TEST(IoFrame, RoundTrip) {
  const CurbsideFrame f = frame_from_curbs({1.5, -2}, {2, 1}, {-1, 3});
  const CurbsideFrame g = io::frame_from_json(io::frame_to_json(f));
  EXPECT_EQ(g.origin(), f.origin());
  EXPECT_LT((g.e1() - f.e1()).norm(), 1e-15);
  EXPECT_LT((g.e2() - f.e2()).norm(), 1e-15);
}

TEST(IoFrame, Errors) {
  EXPECT_EQ(code_of([] { io::frame_from_json(Json::parse(R"({"origin":[0,0]})")); }),
            ErrorCode::kParse);
  EXPECT_EQ(code_of([] {
              io::frame_from_json(
                  Json::parse(R"({"origin":[0,0],"curb1":[1,0],"curb2":[2,0]})"));
            }),
            ErrorCode::kDegenerateDirection);
  EXPECT_EQ(code_of([] { io::load_frame("/nonexistent/frame.json"); }), ErrorCode::kIo);
}

TEST(IoDataset, JsonLinesRoundTrip) {
  Dataset d;
  d.trajectories.push_back(testing::line("a", {0.1, 0.2}, {1.3, -0.7}, 8, 0.5, "straight"));
  d.trajectories.push_back(testing::line("b", {5, 5}, {0, 1}, 4, 0.5));
  std::stringstream buf;
  io::write_dataset(buf, d);
  std::stringstream in(buf.str() + "\n\n");
  const Dataset back = io::read_dataset(in);
  EXPECT_EQ(back.trajectories, d.trajectories);
}

TEST(IoDataset, MalformedLine) {
  std::stringstream in("{\"id\":\"a\",\"dt\":0.5,\"points\":[[0,1]]}\n");
  EXPECT_EQ(code_of([&] { io::read_dataset(in); }), ErrorCode::kParse);
  std::stringstream junk("not json\n");
  EXPECT_EQ(code_of([&] { io::read_dataset(junk); }), ErrorCode::kParse);
}

TEST(IoScene, RoundTrip) {
  SceneSpec s;
  s.name = "x";
  s.corner = {1, 2};
  s.heading = testing::deg(33);
  s.alpha = testing::deg(70);
  s.mix = {0.2, 0.3, 0.5};
  s.crosswalk_left = Vec2(0.2, -1.0);
  s.seed = 99;
  const SceneSpec t = io::scene_from_json(io::scene_to_json(s));
  EXPECT_EQ(t.name, s.name);
  EXPECT_NEAR(t.heading, s.heading, 1e-12);
  EXPECT_NEAR(t.alpha, s.alpha, 1e-12);
  EXPECT_EQ(t.seed, s.seed);
  EXPECT_DOUBLE_EQ(t.mix.cross_right, 0.5);
  ASSERT_TRUE(t.crosswalk_left.has_value());
  EXPECT_FALSE(t.crosswalk_straight.has_value());
  EXPECT_EQ(generate(t, 5, 0.5).trajectories.size(), 5u);
}

TEST(IoScene, BadMix) {
  const Json j = Json::parse(R"({"alpha_deg":90,"intent_mix":{"straight":0.9,"cross-left":0.9}})");
  EXPECT_EQ(code_of([&] { io::scene_from_json(j); }), ErrorCode::kInvalidProportions);
}

TEST(IoConfig, OverridesAndRoundTrip) {
  const Json j = Json::parse(R"({"mode":"baseline","K":5,"kernel":{"noise_sd":0.4},"top_m":2})");
  const PipelineConfig c = io::config_from_json(j);
  EXPECT_EQ(c.mode, Mode::kBaseline);
  EXPECT_EQ(c.dictionary.atoms, 5);
  EXPECT_DOUBLE_EQ(c.kernel.noise_sd, 0.4);
  EXPECT_DOUBLE_EQ(c.kernel.length_x, Kernel{}.length_x);
  EXPECT_EQ(c.top_m, 2u);
  const PipelineConfig d = io::config_from_json(io::config_to_json(c));
  EXPECT_EQ(io::config_to_json(d), io::config_to_json(c));
  EXPECT_THROW(io::config_from_json(Json::parse(R"({"top_m":0})")), Error);
  EXPECT_EQ(code_of([] { io::config_from_json(Json::parse(R"({"K":"many"})")); }),
            ErrorCode::kParse);
}

TEST(IoModel, RoundTripPredictsIdentically) {
  SceneSpec s;
  s.heading = testing::deg(15);
  s.seed = 4;
  PipelineConfig c;
  c.dictionary.atoms = 6;
  c.dictionary.iterations = 40;
  const Dataset d = generate(s, 40, 0.5);
  const TasnscModel m = train(d, s.frame(), c);
  const auto dir = testing::scratch_dir("model");
  io::save_model(dir / "m.json", m);
  const TasnscModel back = io::load_model(dir / "m.json");
  EXPECT_TRUE(back.dictionary.atoms == m.dictionary.atoms);
  EXPECT_EQ(back.transitions.counts(), m.transitions.counts());
  EXPECT_EQ(back.grid, m.grid);
  ASSERT_EQ(back.patterns.size(), m.patterns.size());
  for (const auto& t : d.trajectories) {
    const Trajectory obs = split_horizon(t, c.t_obs, c.t_pred).first;
    const PredictionSet a = predict(m, s.frame(), obs);
    const PredictionSet b = predict(back, s.frame(), obs);
    ASSERT_EQ(a.candidates.size(), b.candidates.size());
    for (std::size_t i = 0; i < a.candidates.size(); ++i) {
      EXPECT_EQ(a.candidates[i].trajectory, b.candidates[i].trajectory);
    }
  }
}

TEST(IoModel, VersionRequired) {
  EXPECT_EQ(code_of([] { io::model_from_json(Json::parse(R"({"format":"tasnsc-model"})")); }),
            ErrorCode::kParse);
}

TEST(IoReport, JsonTableAndPlots) {
  SceneSpec s;
  s.seed = 8;
  PipelineConfig c;
  c.dictionary.atoms = 6;
  c.dictionary.iterations = 40;
  const TasnscModel m = train(generate(s, 30, 0.5), s.frame(), c);
  SceneSpec t = s;
  t.seed = 9;
  EvalReport r = evaluate(m, generate(t, 4, 0.5), s.frame());
  r.train_in = "A";
  r.test_in = "A";
  const Json j = io::report_to_json(r);
  EXPECT_EQ(j.at("algorithm"), "TASNSC");
  EXPECT_EQ(j.at("rows").size(), 4u);
  EXPECT_TRUE(j.at("rows")[0].contains("predict_time"));
  const std::string table = io::format_table(std::span(&r, 1));
  EXPECT_NE(table.find("Classification Acc. (%)"), std::string::npos);
  EXPECT_NE(table.find("TASNSC"), std::string::npos);

  const auto dir = testing::scratch_dir("plots");
  io::write_plot_csv(dir, r);
  std::size_t files = 0;
  for (const auto& e : std::filesystem::directory_iterator(dir)) {
    ++files;
    std::ifstream in(e.path());
    std::string header;
    std::getline(in, header);
    EXPECT_EQ(header, "kind,candidate,likelihood,t,x,y");
  }
  EXPECT_EQ(files, 4u);
}

}  // namespace
}  // namespace tasnsc
