#pragma once

// Seeded self-check suites.
//
// Each suite draws randomized cases from a generator, checks one stated
// property per case against an independent computation (a second engine, a
// by-construction witness, or an exhaustive alternative), and aggregates a
// deterministic report: the same (seed, config) always yields the same
// report.  Every failure carries a command line that replays exactly that
// case (the per-case random stream depends only on the seed and the case
// index, so `--only k` reproduces case k in isolation).

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "ratgame/automata.hpp"
#include "ratgame/membership.hpp"

namespace ratgame {

struct SuiteConfig {
  std::uint64_t seed = 1;
  int cases = 0;                    ///< 0 = suite default
  SearchBounds bounds;              ///< probe bounds for bounded engines
  int horizon = 400;                ///< rounds for play-based suites
  std::uint64_t only_case = 0;      ///< 1-based; 0 = run every case
  std::string program = "ratgame";  ///< binary name used in replay lines
};

struct SuiteFailure {
  std::uint64_t case_index = 0;  ///< 1-based
  std::string description;
  std::string replay;  ///< command line reproducing this case
};

struct SuiteReport {
  std::string suite;
  std::string property;  ///< plain-language statement of what is checked
  std::uint64_t seed = 0;
  std::uint64_t cases = 0;  ///< cases actually run
  std::uint64_t passed = 0;
  std::uint64_t failed = 0;
  std::uint64_t unknown = 0;  ///< cases where a bounded engine stayed silent
  std::map<std::string, std::uint64_t> coverage;
  SearchBounds bounds;
  int horizon = 0;  ///< 0 when the suite plays no games
  std::vector<SuiteFailure> failures;  ///< sorted by case index

  bool ok() const { return failed == 0; }
  /// A clean run that was mostly inconclusive (drives exit status 2).
  bool unknown_dominated() const { return failed == 0 && unknown > passed; }
};

/// Names of the registered suites, in canonical order.
std::vector<std::string> registered_suites();

/// Runs one registered suite ("all" is not a suite; iterate the registry for
/// that).  Throws WordError for unknown names.
SuiteReport run_suite(const std::string& name, const SuiteConfig& config);

/// The command line that replays case `case_index` of `suite` under `config`.
std::string replay_command(const std::string& suite, const SuiteConfig& config,
                           std::uint64_t case_index);

/// Plain-text rendering of a report.
std::string report_to_text(const SuiteReport& r);

/// JSON rendering, schema "report/1".
std::string report_to_json(const SuiteReport& r);

/// Named example machines shared by the suites and the command-line tools.
///   universal / rejector / inf-a / b-at-zero : real-time one-counter
///       machines over {a, b} (everything; nothing; infinitely many a's;
///       infinitely often an excess b returns the a-minus-b balance to zero)
///   universal01 / inf-ones / inf-zeros : deterministic complete counterless
///       machines over {0, 1}
std::vector<std::string> example_machine_names();
BuchiAutomaton example_machine(const std::string& name);

}  // namespace ratgame
