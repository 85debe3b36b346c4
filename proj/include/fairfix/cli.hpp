#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "fairfix/repair.hpp"

namespace fairfix::cli {

inline constexpr int kSchemaVersion = 1;

enum class Command { evaluate, localize, repair };

std::string_view to_string(Command c);

struct RunConfig {
    Command command = Command::evaluate;
    std::filesystem::path model;
    std::filesystem::path data;
    std::optional<std::filesystem::path> test;
    std::string label;
    std::string sensitive;
    std::optional<std::vector<std::string>> features;
    std::string setting = "auto";  // auto | same | diff
    std::optional<std::size_t> layer;  // default: last layer
    std::optional<std::size_t> top_k;
    RepairConfig pso;                  // metric, swarm parameters, positive class
    std::uint64_t seed = 0;
    std::size_t runs = 1;
    bool scores = false;               // include the full score table
    std::filesystem::path out;

    /// auto resolves to SettSame iff the label and sensitive columns coincide.
    Setting resolved_setting() const;
};

/// Applies the keys of a JSON config document (flag names with '_' for '-').
void apply_config_json(RunConfig& config, const nlohmann::json& doc);

/// Runs one command and writes its artifacts under `config.out`. Nothing is
/// written unless the whole command succeeds. Returns the report document.
nlohmann::ordered_json run(const RunConfig& config, std::ostream& log);

/// Entry point: `args` excludes the program name. Returns the exit code
/// (0 on success, 1 on a failed command, 2 on a usage error).
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace fairfix::cli
