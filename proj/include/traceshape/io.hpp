#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "traceshape/assembly.hpp"
#include "traceshape/estimator.hpp"
#include "traceshape/sensing.hpp"

namespace traceshape {

/// Scenario config: JSON object with keys mirroring the Scenario fields plus
/// the polygon vertex list (see README for the schema).
Scenario load_scenario(const std::filesystem::path& file);
Scenario parse_scenario(const std::string& text);
std::string scenario_to_json(const Scenario& scenario);

/// Trace file: JSON lines, one record {"sensor": i, "t": t, "r": value|null}
/// per delivered report; lost reports are simply absent.
void write_traces(const std::filesystem::path& file,
                  const std::vector<std::vector<TraceSample>>& traces);
std::vector<std::vector<TraceSample>> read_traces(const std::filesystem::path& file);

/// Observations file: JSON lines tagged by kind (edge / vertex / adjacency).
void write_observations(const std::filesystem::path& file, const ObservationSet& set);
ObservationSet read_observations(const std::filesystem::path& file);

/// Public parameters handed to the estimator. Unknown fields are rejected so
/// hidden quantities cannot leak in through this file.
void write_known_params(const std::filesystem::path& file, const Scenario& scenario);
KnownParams read_known_params(const std::filesystem::path& file);

struct ReportOptions {
  std::vector<double> true_lengths;  // optional ground truth for error columns
  std::vector<double> true_angles;
};

std::string report_to_json(const EstimationResult& estimate, const AssemblyResult& assembly,
                           const ReportOptions& options = {});
std::string report_to_text(const EstimationResult& estimate, const AssemblyResult& assembly,
                           const ReportOptions& options = {});

struct RunManifest {
  std::string command;
  std::uint64_t scenario_hash = 0;
  std::uint64_t seed = 0;
  std::string version;
  std::string started_at;   // wall-clock; manifests are not byte-reproducible
  std::string finished_at;
  std::vector<std::string> outputs;
};

std::uint64_t fnv1a64(const std::string& bytes);
void write_manifest(const std::filesystem::path& file, const RunManifest& manifest);

inline constexpr const char* kVersion = "traceshape 0.1.0";

}  // namespace traceshape
