#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "icdecay/config.hpp"

namespace icdecay {

/// Files written by a subcommand and its exit status. Messages are one-line
/// summaries meant for the terminal.
struct CommandOutcome
{
    int exit_code = 0;
    std::vector<std::filesystem::path> files;
    std::vector<std::string> messages;
};

/// One tolerance check of `verify`.
struct VerifyCheck
{
    std::string name;
    double value = 0.0;
    double tolerance = 0.0;
    bool upper_bound = true; ///< pass when value <= tolerance, else value >= tolerance
    bool passed = false;
};

/// Nine panel files (theta_deg, intensity_normalized) plus a manifest.
CommandOutcome cmd_panels(const RunConfig& cfg);
/// The normalized field on the configured times and angular grid.
CommandOutcome cmd_map(const RunConfig& cfg);
/// Fringe metrics in windows around 0 and 180 degrees at every configured time.
CommandOutcome cmd_fringes(const RunConfig& cfg);
/// Normalization, Fourier consistency, resonance-sum oracle, route agreement,
/// RMT flatness and the reference fringe tolerances. Exit code 1 if any fails.
CommandOutcome cmd_verify(const RunConfig& cfg);
/// Visibility against beta at the first backward overlap, and against
/// omega_dot at the first overlap after the washout time.
CommandOutcome cmd_scan(const RunConfig& cfg);

/// The checks behind cmd_verify, without writing files.
std::vector<VerifyCheck> run_verification(const RunConfig& cfg);

} // namespace icdecay
