#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "fba/common.hpp"

namespace fba::cli {

// Bad flag value; reported with the flag name and mapped to exit code 2.
class UsageError : public std::runtime_error {
public:
    UsageError(const std::string& flag, const std::string& msg)
        : std::runtime_error(flag + ": " + msg) {}
};

struct RunConfig {
    std::string command;
    std::optional<cplx> q, s, v;
    std::optional<int> n, m, j;
    std::vector<int> subset;
    std::string branch = "1";
    int nodes = 512;
    int depth = 0;
    int q_steps = 12;
    int points = 0;  // 0: command default
    std::optional<double> tol;
    std::string out;
    std::string format = "json";
    std::uint64_t seed = 20240917;
    std::string sweep;
};

struct Result {
    nlohmann::json json;
    std::vector<std::string> header;  // CSV only
    std::vector<std::vector<double>> rows;
    bool pass = true;
};

cplx parse_complex(const std::string& flag, const std::string& text);

Result run(const RunConfig& cfg);

}  // namespace fba::cli
