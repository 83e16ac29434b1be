#pragma once

#include "adriana/des.hpp"
#include "adriana/seir.hpp"
#include "adriana/series.hpp"
#include "adriana/surrogates.hpp"
#include "adriana/toml.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace adriana {

inline constexpr const char* kToolVersion = "1.0.0";

struct PipelineConfig {
    std::string confirmed_path;
    std::string recovered_path;
    std::string deaths_path;
    std::string country = "South Africa";
    double train_fraction = 0.7;
    std::size_t horizon = 400;
    ModelSpec model{ModelKind::Lstm, {{"neurons", 58.0}, {"window_size", 9.0}}};
    bool optimize = false;
    std::size_t ga_population = 10;
    std::size_t ga_generations = 45;
    std::size_t ga_gene_length = 10;
    std::size_t cv_folds = 10;
    std::uint64_t seed = 1;
    SeirParams seir;
    double seir_initial_exposed = 100.0;
    double seir_initial_infectious = 10.0;
    std::size_t seir_horizon = 400;
    double admission_fraction = 0.05;
    DesConfig des;
    std::string out_dir = "out";

    void validate() const;
    /// Round-trippable key-value snapshot of the effective settings.
    std::string snapshot() const;
};

PipelineConfig pipeline_config_from_tree(const ConfigTree& tree);
DesConfig des_config_from_tree(const ConfigTree& tree, const std::string& prefix = "des",
                               DesConfig base = {});
SeirParams seir_params_from_tree(const ConfigTree& tree, const std::string& prefix = "seir");

struct StageRecord {
    std::string name;
    std::vector<std::string> outputs;         // paths relative to out_dir
    std::vector<std::string> digests;         // fnv1a-64 hex, one per output
};

struct RunManifest {
    std::string tool_version = kToolVersion;
    std::uint64_t seed = 1;
    std::string created_at;                   // ISO-8601 UTC, informational only
    std::string out_dir;
    std::string config_snapshot;
    std::string config_digest;
    std::vector<StageRecord> stages;
    std::string failed_stage;                 // empty on success
    bool completed = false;

    const StageRecord* find_stage(const std::string& name) const;
    void save(const std::string& path) const;
    static RunManifest load(const std::string& path);
};

/// FNV-1a 64-bit over raw bytes; stable across platforms.
std::uint64_t fnv1a(const std::string& bytes);
std::string digest_file(const std::string& path);

/// Executes every stage in order and writes manifest.json under out_dir.
/// A stage failure still writes the partial manifest, then rethrows with
/// the stage name attached.
RunManifest run_pipeline(const PipelineConfig& config);

/// Writes one day,kind,value CSV per series from a completed run's
/// artifacts. Throws IncompleteRun when the forecast stage is missing.
std::vector<std::string> emit_plot_data(const RunManifest& manifest);

} // namespace adriana
