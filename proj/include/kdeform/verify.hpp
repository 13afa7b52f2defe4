#pragma once

#include "kdeform/models.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace kdeform {

inline constexpr const char* kToolVersion = "kdeform 0.1.0";

enum class CheckMode {
  gating,       // pass iff max residual <= tolerance
  report_only,  // logged, never blocks
  lower_bound,  // pass iff min residual > tolerance (the quantity must not vanish)
};

/// Which tolerance override applies to a check. `fixed` checks keep their
/// pinned tolerance.
enum class OrderClass { fixed, first_order, second_order };

struct CheckSpec {
  std::string id;
  std::string anchor;     // short label of the identity being verified
  std::string statement;  // the identity, written out
  OrderClass order = OrderClass::fixed;
  CheckMode mode = CheckMode::gating;
  double tolerance = 0.0;
};

/// Every check in report order.
const std::vector<CheckSpec>& check_registry();
const CheckSpec& find_check(const std::string& id);

struct RunConfig {
  ModelParams model;
  int n_samples = 100;
  std::uint64_t seed = 42;
  std::optional<double> first_order_tolerance;
  std::optional<double> second_order_tolerance;
  std::vector<std::string> checks;  // empty: all
  std::string output_path;          // empty: stdout

  /// Throws std::invalid_argument on bad sample counts, tolerances or check ids.
  void validate() const;
  [[nodiscard]] double tolerance_for(const CheckSpec& spec) const;
};

enum class CheckStatus { pass, fail, skipped, report_only };

struct CheckRecord {
  std::string id;
  std::string anchor;
  std::string statement;
  CheckMode mode = CheckMode::gating;
  CheckStatus status = CheckStatus::skipped;
  int n_samples = 0;
  double max_abs_residual = 0.0;
  double mean_abs_residual = 0.0;
  double min_abs_residual = 0.0;
  double tolerance = 0.0;
  std::string notes;
};

struct VerificationReport {
  std::string model;
  std::uint64_t seed = 0;
  int n_samples = 0;
  std::string convention;
  std::string tool_version;
  std::vector<CheckRecord> records;

  /// True iff no gating or lower-bound check failed.
  [[nodiscard]] bool all_pass() const;
  [[nodiscard]] const CheckRecord* find(const std::string& id) const;
};

VerificationReport run_suite(const RunConfig& config);
/// Stable TOML-style rendering with 17 significant digits.
std::string render_report(const VerificationReport& report);
std::string render_check_list();
std::string status_name(CheckStatus status);
std::string mode_name(CheckMode mode);

/// CSV: sample,direction,point,K,K_tilde,general_bound,orthogonal_bound,margin.
/// Direction 0 is g-orthogonal to xi and Jxi when n >= 2; the rest are random.
/// Zero samples give the header only.
std::string decay_table_csv(const RunConfig& config, int directions_per_point);

/// CSV: r,computed_length,artanh_reference,log_lower_bound for radial segments
/// from the origin of the flat ball.
std::string length_growth_csv(const RunConfig& config, const std::vector<double>& radii);

}  // namespace kdeform
