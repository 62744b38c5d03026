#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "rotenberg/field.hpp"
#include "rotenberg/model.hpp"

namespace rotenberg {

struct InitialSpec {
    std::string type = "uniform";  // uniform | linear-x | bump | csv | random
    double center_x = 0.5;
    double center_v = 0.0;
    double width = 0.1;
    std::filesystem::path path;
    std::optional<std::uint64_t> seed;
    std::string shape = "smooth";  // random: smooth | step
};

struct Tolerances {
    double kernel = 1e-3;       // raw row deviation of the discretised kernel
    double power = 1e-10;       // power iteration step
    std::size_t max_iter = 100000;
    double agreement = 1e-6;    // multi-start L^1 agreement
    double norm = 1e-9;         // norm certificates
    double extension = 1e-6;    // weighted-norm bound
    double invariance = 5e-3;
    double partial_integrality = 1e-12;
};

struct Options {
    std::optional<double> omega;      // weighted norm rate for `extend`
    std::size_t j_max = 8;
    std::optional<double> t_max;      // extension depth for `extend`
    int vepsilon_n = 2;
    std::size_t starts = 3;
};

/// Everything one CLI invocation needs. Relative paths are resolved against
/// the directory of the config file.
struct ExperimentConfig {
    ModelParams params;
    bool continuous = true;
    std::size_t nv = 200;
    std::vector<double> nodes;
    std::vector<double> masses;
    std::optional<BuiltinKernel> builtin;
    std::filesystem::path kernel_csv;
    std::size_t nx = 400;
    std::vector<InitialSpec> initials;
    std::vector<double> times;
    Options options;
    Tolerances tolerances;
    std::filesystem::path output_dir = "out";
    std::uint64_t seed = 0;
    std::string canonical;  // normalised JSON text of the input

    Model build_model() const;
    DensityField build_initial(const InitialSpec& spec, const Model& model) const;

    /// FNV-1a of the canonical text and the seed.
    std::uint64_t hash() const;
    /// "config_hash=<hex> seed=<n>", the first line of every CSV.
    std::string stamp() const;
};

ExperimentConfig parse_config(const std::string& json_text, const std::filesystem::path& base_dir);
ExperimentConfig load_config(const std::filesystem::path& path);

}  // namespace rotenberg
