#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace linkcusum {

// Raised on malformed or inconsistent panel inputs. The message names the
// offending (panel, subject, t) where one exists.
class PanelError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// One panel of observations: N subjects (rows) by n time points (columns).
// Time is ordinal; whatever labels the source file used are densified to
// 1..n in order of appearance.
struct Panel {
  std::string name;  // "x" or "y"
  std::vector<std::string> subject_ids;
  std::size_t n_times = 0;
  std::vector<double> values;  // row-major, subject_ids.size() * n_times

  std::size_t n_subjects() const { return subject_ids.size(); }

  double cell(std::size_t subject, std::size_t t) const {
    return values[subject * n_times + t];
  }
  double& cell(std::size_t subject, std::size_t t) {
    return values[subject * n_times + t];
  }

  // Copies column t (0-based) into out, one value per subject.
  void column(std::size_t t, std::vector<double>& out) const;
};

enum class Pairing { independent, paired };

std::string to_string(Pairing pairing);

struct PanelPair {
  Panel x;
  Panel y;
  Pairing pairing = Pairing::independent;
};

// Evaluation points x_1 < ... < x_M with nonnegative weights.
struct EvaluationGrid {
  std::vector<double> points;
  std::vector<double> weights;
  // Set when the pooled sample had a single distinct value and the grid
  // collapsed to one point.
  bool degenerate_support = false;

  std::size_t size() const { return points.size(); }
};

enum class CsvFormat { Long, Wide };

// Long CSV: header "panel,subject,t,value", one observation per row.
PanelPair load_panels_long(const std::string& path,
                           Pairing pairing = Pairing::independent);

// Wide CSV: one file per panel, header "subject,t1,...,tn".
Panel read_wide_panel(const std::string& path, const std::string& name);
PanelPair load_panels_wide(const std::string& x_path,
                           const std::string& y_path,
                           Pairing pairing = Pairing::independent);

void write_panels_long(const PanelPair& pair, const std::string& path);
void write_panel_wide(const Panel& panel, const std::string& path);

// Ingestion-time invariants: N >= 2, n >= 2, all cells finite, unique ids.
void validate_panel(const Panel& panel);
// Adds pair-level checks: equal n; paired mode also needs equal N and
// matching subject ids.
void validate_pair(const PanelPair& pair);
void validate_grid(const EvaluationGrid& grid);

// M points at equally spaced quantile levels in [0.05, 0.95] of the pooled
// y values (M == 1 uses the midpoint level 0.5), deduplicated, unit
// weights. A constant pooled sample yields a one-point grid with
// degenerate_support set.
EvaluationGrid default_grid(const PanelPair& pair, std::size_t m);

// Explicit grid: sorts, drops exact duplicates, unit weights.
EvaluationGrid grid_from_points(std::vector<double> points);

}  // namespace linkcusum
