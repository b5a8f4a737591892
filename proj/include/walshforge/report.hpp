#pragma once

// Analysis reports, table reproduction and the self test behind the CLI.
// Everything here is deterministic given the inputs and the seed; timings are
// the one exception and are only emitted on request.

#include <cstdint>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "walshforge/boolfun.hpp"
#include "walshforge/constructions.hpp"
#include "walshforge/oracles.hpp"

namespace walshforge {

inline constexpr std::string_view kSchema = "walsh-forge/1";
inline constexpr std::string_view kVersion = "1.0.0";
inline constexpr std::uint64_t kDefaultSeed = 20240607;

struct Criteria {
  unsigned n = 0;
  std::map<std::int64_t, std::uint64_t> histogram;
  std::int64_t nonlinearity = 0;
  unsigned degree = 0;
  std::optional<unsigned> ai;  // empty: n > 14 or skipped
  bool ai_skipped = false;
  bool balanced = false;
  std::string classification;
};

/// Spectrum, NL, degree, AI (n <= 14 unless skipped), balance and class.
Criteria compute_criteria(const BooleanFunction& f, bool skip_ai);

struct RunOptions {
  bool skip_ai = false;
  bool timings = false;
  unsigned threads = 1;
  std::uint64_t seed = kDefaultSeed;
};

using Timings = std::vector<std::pair<std::string, double>>;  // stage -> milliseconds

struct AnalysisReport {
  Field field;
  ConstructionSpec spec;
  Criteria criteria;
  std::vector<Verdict> verdicts;
  std::uint64_t seed = kDefaultSeed;
  std::optional<Timings> timings;

  nlohmann::ordered_json to_json() const;
};

/// The theorem whose hypotheses the construction's family speaks to, if any.
std::optional<TheoremId> theorem_for(const ConstructionSpec& spec);

/// validate -> parameterize -> spectrum -> criteria -> classify. Throws
/// InvalidSpec when the construction fails validation in `field`. A theorem verdict is
/// attached when the field is the canonical one and the construction meets a theorem.
AnalysisReport analyze(const ConstructionSpec& spec, const Field& field, const RunOptions& options);

// ---------------------------------------------------------------------------
// CSV: n,family,params,histogram,nl,degree,ai,class

std::string csv_header();
std::string csv_row(const ConstructionSpec& spec, const Criteria& c);

/// "-16:10 -8:6 0:30 8:18"
std::string format_histogram(const std::map<std::int64_t, std::uint64_t>& h);
std::map<std::int64_t, std::uint64_t> parse_histogram(const std::string& text);

nlohmann::ordered_json histogram_to_json(const std::map<std::int64_t, std::uint64_t>& h);

// ---------------------------------------------------------------------------
// Table reproduction

struct CellDiff {
  std::string column;
  std::string expected;
  std::string measured;
};

struct RowResult {
  unsigned n = 0;
  ConstructionSpec spec;
  Criteria measured;
  std::vector<CellDiff> diffs;
  std::vector<std::string> checked;  // columns compared
  std::optional<double> millis;

  bool pass() const { return diffs.empty(); }
};

struct Reproduction {
  std::string table;
  std::string caption;
  unsigned max_n = 0;
  std::uint64_t seed = kDefaultSeed;
  std::vector<RowResult> rows;

  bool pass() const;
  nlohmann::ordered_json to_json() const;
  void write_csv(std::ostream& out) const;
  /// One line per row with a mark per column, then diffs.
  void write_matrix(std::ostream& out) const;
};

/// Known targets: table1, table3, table4.
std::vector<std::string> table_names();

/// Rows with n <= max_n; max_n must be 6, 10 or 14. Throws InvalidSpec for an
/// unknown table or max_n.
Reproduction reproduce(const std::string& table, unsigned max_n, const RunOptions& options);

// ---------------------------------------------------------------------------

struct SelfTestItem {
  std::string name;
  bool pass = false;
  std::string detail;
};

/// Quick internal consistency checks (kernel equivalence, oracle agreement).
std::vector<SelfTestItem> run_selftest(std::uint64_t seed);

namespace detail {
/// Raw JSON of an embedded table, empty if unknown.
std::string_view embedded_table(std::string_view name);
}  // namespace detail

}  // namespace walshforge
