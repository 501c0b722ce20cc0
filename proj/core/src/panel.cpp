#include "linkcusum/panel.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstddef>
#include <fstream>
#include <limits>
#include <map>
#include <set>
#include <sstream>
#include <system_error>
#include <utility>

#include "linkcusum/estimator.hpp"

namespace linkcusum {

namespace {

std::string format_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

double parse_double(const std::string& field, const std::string& where) {
  double v = 0.0;
  const char* first = field.data();
  const char* last = first + field.size();
  auto res = std::from_chars(first, last, v);
  if (res.ec != std::errc{} || res.ptr != last) {
    throw PanelError("unparseable number \"" + field + "\" in " + where);
  }
  if (!std::isfinite(v)) {
    throw PanelError("non-finite value \"" + field + "\" in " + where);
  }
  return v;
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      fields.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur += c;
    }
  }
  fields.push_back(cur);
  return fields;
}

// Reads lines, skipping a trailing empty line; strips \r for CRLF input.
std::vector<std::string> read_lines(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw PanelError("cannot open " + path);
  }
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    lines.push_back(line);
  }
  while (!lines.empty() && lines.back().empty()) {
    lines.pop_back();
  }
  return lines;
}

}  // namespace

void Panel::column(std::size_t t, std::vector<double>& out) const {
  out.resize(n_subjects());
  for (std::size_t i = 0; i < n_subjects(); ++i) {
    out[i] = cell(i, t);
  }
}

std::string to_string(Pairing pairing) {
  return pairing == Pairing::paired ? "paired" : "independent";
}

PanelPair load_panels_long(const std::string& path, Pairing pairing) {
  const std::vector<std::string> lines = read_lines(path);
  if (lines.empty()) {
    throw PanelError(path + ": empty file");
  }
  {
    const std::vector<std::string> header = split_csv_line(lines[0]);
    if (header != std::vector<std::string>{"panel", "subject", "t", "value"}) {
      throw PanelError(path + ": expected header panel,subject,t,value");
    }
  }

  struct Row {
    std::size_t panel;  // 0 = x, 1 = y
    std::string subject;
    std::string t_label;
    double value;
  };
  std::vector<Row> rows;
  rows.reserve(lines.size() - 1);
  // Time labels are ordinal; densify to 0..n-1 in order of first appearance
  // across both panels so the two share one axis.
  std::map<std::string, std::size_t> t_index;
  std::vector<std::string> t_labels;
  std::set<std::string> panel_t_labels[2];

  for (std::size_t li = 1; li < lines.size(); ++li) {
    if (lines[li].empty()) {
      continue;
    }
    const std::vector<std::string> f = split_csv_line(lines[li]);
    const std::string where = path + " line " + std::to_string(li + 1);
    if (f.size() != 4) {
      throw PanelError(where + ": expected 4 fields, got " +
                       std::to_string(f.size()));
    }
    std::size_t panel;
    if (f[0] == "x") {
      panel = 0;
    } else if (f[0] == "y") {
      panel = 1;
    } else {
      throw PanelError(where + ": panel must be x or y, got \"" + f[0] + "\"");
    }
    if (f[1].empty()) {
      throw PanelError(where + ": empty subject id");
    }
    if (f[2].empty()) {
      throw PanelError(where + ": empty time label");
    }
    const double value = parse_double(f[3], where);
    if (t_index.emplace(f[2], t_labels.size()).second) {
      t_labels.push_back(f[2]);
    }
    panel_t_labels[panel].insert(f[2]);
    rows.push_back(Row{panel, f[1], f[2], value});
  }

  if (panel_t_labels[0] != panel_t_labels[1]) {
    throw PanelError(path + ": time axes differ between panels x and y");
  }
  const std::size_t n = t_labels.size();

  PanelPair pair;
  pair.pairing = pairing;
  Panel* panels[2] = {&pair.x, &pair.y};
  pair.x.name = "x";
  pair.y.name = "y";
  std::map<std::string, std::size_t> subject_index[2];
  std::vector<std::vector<bool>> seen[2];

  for (const Row& row : rows) {
    Panel& p = *panels[row.panel];
    auto [it, inserted] =
        subject_index[row.panel].emplace(row.subject, p.subject_ids.size());
    if (inserted) {
      p.subject_ids.push_back(row.subject);
      p.values.resize(p.values.size() + n,
                      std::numeric_limits<double>::quiet_NaN());
      seen[row.panel].emplace_back(n, false);
    }
    const std::size_t s = it->second;
    const std::size_t t = t_index.at(row.t_label);
    if (seen[row.panel][s][t]) {
      throw PanelError(path + ": duplicate cell (panel " + p.name +
                       ", subject " + row.subject + ", t " + row.t_label +
                       ")");
    }
    seen[row.panel][s][t] = true;
    p.values[s * n + t] = row.value;
  }

  for (std::size_t pi = 0; pi < 2; ++pi) {
    Panel& p = *panels[pi];
    p.n_times = n;
    for (std::size_t s = 0; s < p.n_subjects(); ++s) {
      for (std::size_t t = 0; t < n; ++t) {
        if (!seen[pi][s][t]) {
          throw PanelError(path + ": missing cell (panel " + p.name +
                           ", subject " + p.subject_ids[s] + ", t " +
                           t_labels[t] + ")");
        }
      }
    }
  }

  // Paired data may list y subjects in a different order; align to x.
  if (pairing == Pairing::paired &&
      pair.x.n_subjects() == pair.y.n_subjects()) {
    Panel reordered;
    reordered.name = "y";
    reordered.n_times = n;
    bool ok = true;
    for (const std::string& id : pair.x.subject_ids) {
      auto it = subject_index[1].find(id);
      if (it == subject_index[1].end()) {
        ok = false;
        break;
      }
      reordered.subject_ids.push_back(id);
      const std::size_t s = it->second;
      reordered.values.insert(reordered.values.end(),
                              pair.y.values.begin() + s * n,
                              pair.y.values.begin() + (s + 1) * n);
    }
    if (ok) {
      pair.y = std::move(reordered);
    }
  }

  validate_pair(pair);
  return pair;
}

Panel read_wide_panel(const std::string& path, const std::string& name) {
  const std::vector<std::string> lines = read_lines(path);
  if (lines.empty()) {
    throw PanelError(path + ": empty file");
  }
  const std::vector<std::string> header = split_csv_line(lines[0]);
  if (header.size() < 2 || header[0] != "subject") {
    throw PanelError(path + ": expected header subject,t1,...,tn");
  }
  const std::size_t n = header.size() - 1;

  Panel panel;
  panel.name = name;
  panel.n_times = n;
  for (std::size_t li = 1; li < lines.size(); ++li) {
    if (lines[li].empty()) {
      continue;
    }
    const std::vector<std::string> f = split_csv_line(lines[li]);
    const std::string where = path + " line " + std::to_string(li + 1);
    if (f.size() != n + 1) {
      throw PanelError(where + ": expected " + std::to_string(n + 1) +
                       " fields, got " + std::to_string(f.size()));
    }
    if (f[0].empty()) {
      throw PanelError(where + ": empty subject id");
    }
    panel.subject_ids.push_back(f[0]);
    for (std::size_t t = 0; t < n; ++t) {
      panel.values.push_back(parse_double(f[t + 1], where));
    }
  }
  return panel;
}

PanelPair load_panels_wide(const std::string& x_path,
                           const std::string& y_path, Pairing pairing) {
  PanelPair pair;
  pair.x = read_wide_panel(x_path, "x");
  pair.y = read_wide_panel(y_path, "y");
  pair.pairing = pairing;

  if (pairing == Pairing::paired &&
      pair.x.n_subjects() == pair.y.n_subjects()) {
    std::map<std::string, std::size_t> y_index;
    for (std::size_t s = 0; s < pair.y.n_subjects(); ++s) {
      y_index.emplace(pair.y.subject_ids[s], s);
    }
    Panel reordered;
    reordered.name = "y";
    reordered.n_times = pair.y.n_times;
    bool ok = true;
    for (const std::string& id : pair.x.subject_ids) {
      auto it = y_index.find(id);
      if (it == y_index.end()) {
        ok = false;
        break;
      }
      reordered.subject_ids.push_back(id);
      const std::size_t s = it->second;
      const std::size_t n = pair.y.n_times;
      reordered.values.insert(reordered.values.end(),
                              pair.y.values.begin() + s * n,
                              pair.y.values.begin() + (s + 1) * n);
    }
    if (ok) {
      pair.y = std::move(reordered);
    }
  }

  validate_pair(pair);
  return pair;
}

void write_panels_long(const PanelPair& pair, const std::string& path) {
  std::ofstream out(path);
  if (!out) {
    throw PanelError("cannot open " + path + " for writing");
  }
  out << "panel,subject,t,value\n";
  const Panel* panels[2] = {&pair.x, &pair.y};
  for (const Panel* p : panels) {
    for (std::size_t s = 0; s < p->n_subjects(); ++s) {
      for (std::size_t t = 0; t < p->n_times; ++t) {
        out << p->name << ',' << p->subject_ids[s] << ',' << (t + 1) << ','
            << format_double(p->cell(s, t)) << '\n';
      }
    }
  }
  if (!out) {
    throw PanelError("write failed for " + path);
  }
}

void write_panel_wide(const Panel& panel, const std::string& path) {
  std::ofstream out(path);
  if (!out) {
    throw PanelError("cannot open " + path + " for writing");
  }
  out << "subject";
  for (std::size_t t = 0; t < panel.n_times; ++t) {
    out << ",t" << (t + 1);
  }
  out << '\n';
  for (std::size_t s = 0; s < panel.n_subjects(); ++s) {
    out << panel.subject_ids[s];
    for (std::size_t t = 0; t < panel.n_times; ++t) {
      out << ',' << format_double(panel.cell(s, t));
    }
    out << '\n';
  }
  if (!out) {
    throw PanelError("write failed for " + path);
  }
}

void validate_panel(const Panel& panel) {
  if (panel.name != "x" && panel.name != "y") {
    throw PanelError("panel name must be x or y, got \"" + panel.name + "\"");
  }
  if (panel.n_subjects() < 2) {
    throw PanelError("panel " + panel.name + ": need at least 2 subjects, got " +
                     std::to_string(panel.n_subjects()));
  }
  if (panel.n_times < 2) {
    throw PanelError("panel " + panel.name +
                     ": need at least 2 time points, got " +
                     std::to_string(panel.n_times));
  }
  if (panel.values.size() != panel.n_subjects() * panel.n_times) {
    throw PanelError("panel " + panel.name + ": value buffer has " +
                     std::to_string(panel.values.size()) + " cells, expected " +
                     std::to_string(panel.n_subjects() * panel.n_times));
  }
  for (double v : panel.values) {
    if (!std::isfinite(v)) {
      throw PanelError("panel " + panel.name + ": non-finite cell");
    }
  }
  std::set<std::string> ids(panel.subject_ids.begin(),
                            panel.subject_ids.end());
  if (ids.size() != panel.subject_ids.size()) {
    throw PanelError("panel " + panel.name + ": duplicate subject ids");
  }
}

void validate_pair(const PanelPair& pair) {
  validate_panel(pair.x);
  validate_panel(pair.y);
  if (pair.x.n_times != pair.y.n_times) {
    throw PanelError("panels disagree on time axis: x has " +
                     std::to_string(pair.x.n_times) + " points, y has " +
                     std::to_string(pair.y.n_times));
  }
  if (pair.pairing == Pairing::paired) {
    if (pair.x.n_subjects() != pair.y.n_subjects()) {
      throw PanelError("paired mode needs equal subject counts, got " +
                       std::to_string(pair.x.n_subjects()) + " and " +
                       std::to_string(pair.y.n_subjects()));
    }
    if (pair.x.subject_ids != pair.y.subject_ids) {
      throw PanelError("paired mode needs matching subject ids");
    }
  }
}

void validate_grid(const EvaluationGrid& grid) {
  if (grid.points.empty()) {
    throw PanelError("evaluation grid is empty");
  }
  if (grid.points.size() != grid.weights.size()) {
    throw PanelError("grid has " + std::to_string(grid.points.size()) +
                     " points but " + std::to_string(grid.weights.size()) +
                     " weights");
  }
  for (std::size_t i = 0; i < grid.points.size(); ++i) {
    if (!std::isfinite(grid.points[i])) {
      throw PanelError("grid point " + std::to_string(i) + " is not finite");
    }
    if (i > 0 && grid.points[i] <= grid.points[i - 1]) {
      throw PanelError("grid points must be strictly increasing");
    }
    if (!(grid.weights[i] >= 0.0) || !std::isfinite(grid.weights[i])) {
      throw PanelError("grid weight " + std::to_string(i) +
                       " must be finite and nonnegative");
    }
  }
}

EvaluationGrid default_grid(const PanelPair& pair, std::size_t m) {
  if (m < 1) {
    throw PanelError("grid needs at least one point");
  }
  std::vector<double> pooled(pair.y.values);
  std::sort(pooled.begin(), pooled.end());

  EvaluationGrid grid;
  if (pooled.front() == pooled.back()) {
    // Constant sample: every quantile is the same point.
    grid.points.push_back(pooled.front());
    grid.weights.push_back(1.0);
    grid.degenerate_support = true;
    return grid;
  }

  for (std::size_t i = 0; i < m; ++i) {
    const double level =
        m == 1 ? 0.5
               : 0.05 + 0.9 * static_cast<double>(i) /
                            static_cast<double>(m - 1);
    const double q = sample_quantile(pooled, level);
    if (grid.points.empty() || q > grid.points.back()) {
      grid.points.push_back(q);
    }
  }
  grid.weights.assign(grid.points.size(), 1.0);
  validate_grid(grid);
  return grid;
}

EvaluationGrid grid_from_points(std::vector<double> points) {
  std::sort(points.begin(), points.end());
  points.erase(std::unique(points.begin(), points.end()), points.end());
  EvaluationGrid grid;
  grid.points = std::move(points);
  grid.weights.assign(grid.points.size(), 1.0);
  validate_grid(grid);
  return grid;
}

}  // namespace linkcusum
