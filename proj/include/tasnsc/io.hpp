#ifndef TASNSC_IO_HPP_
#define TASNSC_IO_HPP_

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>

#include "json.hpp"

#include "tasnsc/geometry.hpp"
#include "tasnsc/metrics.hpp"
#include "tasnsc/predictor.hpp"
#include "tasnsc/synthgen.hpp"
#include "tasnsc/trajectory.hpp"

namespace tasnsc::io {

using Json = nlohmann::json;

inline constexpr int kModelVersion = 1;

// Every reader throws Error(kIo) when a file cannot be opened and
// Error(kParse) on malformed content.

Json read_json_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& text);

/// {"origin":[x,y], "curb1":[dx,dy], "curb2":[dx,dy]}
CurbsideFrame frame_from_json(const Json& j);
Json frame_to_json(const CurbsideFrame& frame);
CurbsideFrame load_frame(const std::filesystem::path& path);

/// {"id":"...", "dt":0.5, "points":[[t,x,y],...]} with an optional
/// "intent" tag.
Trajectory trajectory_from_json(const Json& j);
Json trajectory_to_json(const Trajectory& traj);
/// JSON lines, one trajectory per line; blank lines are skipped.
Dataset read_dataset(std::istream& in);
Dataset read_dataset(const std::filesystem::path& path);
void write_dataset(std::ostream& out, const Dataset& data);
void write_dataset(const std::filesystem::path& path, const Dataset& data);

/// Angles are stored in degrees ("heading_deg", "alpha_deg").
SceneSpec scene_from_json(const Json& j);
Json scene_to_json(const SceneSpec& scene);
SceneSpec load_scene(const std::filesystem::path& path);

/// Fields present in `j` override those of `base`.
PipelineConfig config_from_json(const Json& j, PipelineConfig base = {});
Json config_to_json(const PipelineConfig& config);

Json model_to_json(const TasnscModel& model);
/// Rebuilds the GP factorizations.
TasnscModel model_from_json(const Json& j);
void save_model(const std::filesystem::path& path, const TasnscModel& model);
TasnscModel load_model(const std::filesystem::path& path);

Json report_to_json(const EvalReport& report);
/// Aligned text table, one row per report.
std::string format_table(std::span<const EvalReport> reports);
/// One CSV per test trajectory: kind,candidate,likelihood,t,x,y.
void write_plot_csv(const std::filesystem::path& dir, const EvalReport& report);

}  // namespace tasnsc::io

#endif  // TASNSC_IO_HPP_
