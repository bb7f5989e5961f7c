#pragma once

// Run manifests and the certification report assembled from them.

#include <array>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "bellcert/event_io.hpp"
#include "bellcert/events.hpp"
#include "bellcert/nosignaling.hpp"
#include "bellcert/pvalues.hpp"
#include "bellcert/qrng.hpp"
#include "bellcert/spacetime.hpp"

namespace bellcert {

inline constexpr double kDefaultTau = 6.3e-4;

struct ReportOptions {
  /// Decimals for S and correlators, significant decimals for P-values.
  int precision = 3;
  std::vector<std::string> formats{"text"};

  bool operator==(const ReportOptions&) const = default;
};

/// Everything fixed before a run is analysed.
struct RunManifest {
  std::string run_id;
  std::string label;
  /// Relative paths are resolved against the manifest's directory.
  std::filesystem::path events;
  EventFormat format = EventFormat::automatic;
  double tau = kDefaultTau;
  SettingAngles angles;
  ReportOptions report;
  std::string note;
  std::optional<PredictabilityBudget> qrng_budget;
  std::optional<SpacetimeConfig> spacetime;

  bool operator==(const RunManifest&) const = default;
};

/// Throws ParseError on malformed JSON and ValidationError on bad content.
/// `base_dir` anchors a relative event path.
RunManifest parse_manifest(std::string_view json_text,
                           const std::filesystem::path& base_dir = {});
/// Throws IoError when the file cannot be read.
RunManifest load_manifest(const std::filesystem::path& path);
/// Event path written as given (relative paths stay relative).
std::string manifest_to_json(const RunManifest& manifest);
/// τ in [0, 1/2], precision in [0, 17], known formats, event file present.
void validate_manifest(const RunManifest& manifest);

struct CorrelatorRow {
  Choice a = Choice::unprimed;
  Choice b = Choice::unprimed;
  double a_deg = 0.0;
  double b_deg = 0.0;
  OutcomeCounts counts;
  int g = -1;
  std::optional<Correlator> correlator;

  bool operator==(const CorrelatorRow&) const = default;
};

struct StateReport {
  Herald herald = Herald::psi_plus;
  std::array<CorrelatorRow, 4> rows;
  /// Σ g·E with per-cell sample σ.
  std::optional<SEstimate> s_per_setting;
  /// Same value with binomial σ; the weights of the combined mean.
  std::optional<SEstimate> s_per_setting_binomial;
  SEstimate s_event_based;
  WinCount wins;
  PValueReport martingale;
  PValueReport game;

  bool operator==(const StateReport&) const = default;
};

struct CombinedReport {
  std::optional<SEstimate> weighted_mean;
  /// Both heralds pooled per setting pair, sample σ.
  std::optional<SEstimate> pooled;
  /// Mean of f_i = 8W/N − 4 over all events.
  SEstimate event_based;
  WinCount wins;
  PValueReport martingale;
  PValueReport game;

  bool operator==(const CombinedReport&) const = default;
};

struct CertificationReport {
  std::string run_id;
  std::string label;
  std::string note;
  double tau = kDefaultTau;
  SettingAngles angles;
  std::uint64_t n_events = 0;
  /// Heralds with at least one event, Ψ⁺ first.
  std::vector<StateReport> states;
  CombinedReport combined;
  std::optional<NoSignalingReport> nosignaling;
  std::optional<BudgetResult> qrng;
  std::optional<SpacetimeReport> spacetime;

  bool operator==(const CertificationReport&) const = default;
};

/// Reads the event file and analyses it.
CertificationReport analyze(const RunManifest& manifest);

/// Analysis of an in-memory dataset with the manifest's τ, angles, labels and
/// optional sections.
CertificationReport analyze_dataset(const RunDataset& dataset,
                                    const RunManifest& manifest);

std::string render_text(const CertificationReport& report, int precision = 3);
/// Full-precision JSON; non-finite numbers are written as null.
std::string render_json(const CertificationReport& report);
/// Inverse of render_json. Throws ParseError.
CertificationReport parse_report_json(std::string_view json_text);

/// Writes <id>.csv for every published run into `fixtures_dir` and a
/// manifest <id>.json pointing at it into `manifests_dir`. Returns the
/// written paths.
std::vector<std::filesystem::path> write_published_fixtures(
    const std::filesystem::path& fixtures_dir,
    const std::filesystem::path& manifests_dir);

}  // namespace bellcert
