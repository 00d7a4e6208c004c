#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include "ftiss/analysis.hpp"
#include "ftiss/scenario.hpp"
#include "ftiss/trajectory.hpp"

namespace ftiss {

/// Parses the sectioned key = value scenario format and validates the
/// result. Throws ParseError (first syntax/field problem, with its line) or
/// ValidationError (every violated invariant). `require_rigidity = false`
/// skips only the rigidity check of the desired formation.
Scenario parse_scenario(const std::string& text, const std::string& name = "scenario",
                        bool require_rigidity = true);
Scenario load_scenario(const std::filesystem::path& path, bool require_rigidity = true);

/// Canonical text form; parse_scenario(format_scenario(s)) reproduces s.
std::string format_scenario(const Scenario& scenario);

/// `t,p_1_x,...,p_n_z,ze_1,...,ze_m,V1,V,gate,bound`, 17 significant digits.
std::string csv_header(int agent_count, int edge_count);
void write_csv(const TrajectoryLog& log, std::ostream& os);
void emit_csv(const TrajectoryLog& log, const std::filesystem::path& path);

/// Reads the columns written by write_csv (estimates are not part of the CSV
/// and come back empty).
TrajectoryLog read_csv(std::istream& is);
TrajectoryLog read_csv(const std::filesystem::path& path);

/// `<stem>_trajectories.csv` (t and positions) and `<stem>_errors.csv`
/// (t, each ze_k and |ze|).
void emit_plot_data(const TrajectoryLog& log, const std::filesystem::path& dir,
                    const std::string& stem);

/// Human-readable end-of-run summary.
std::string emit_summary(const TrajectoryLog& log, const Scenario& scenario,
                         const FtissConstants& desired_consts);

/// Shortest round-trip text for a double (17 significant digits).
std::string format_double(double v);

}  // namespace ftiss
