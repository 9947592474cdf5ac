#include "rhp/render.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace rhp {

namespace {

constexpr int kCell = 32;
constexpr int kMargin = 16;
const char* const kColors[] = {"#d62728", "#1f77b4", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#e377c2"};

const char* color(int agent) { return kColors[agent % 7]; }

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '<') out += "&lt;";
    else if (c == '>') out += "&gt;";
    else if (c == '&') out += "&amp;";
    else if (c == '"') out += "&quot;";
    else out += c;
  }
  return out;
}

// Per-agent offset inside a cell so that overlapping traces stay visible.
int offset(int agent, int n) { return n <= 1 ? 0 : (agent * 12) / (n - 1) - 6; }

}  // namespace

bool renderable(const Scenario& sc) {
  if (sc.agents.empty()) return false;
  for (const auto& a : sc.agents)
    if (!a.grid || a.grid->width != sc.agents[0].grid->width || a.grid->height != sc.agents[0].grid->height)
      return false;
  return true;
}

std::vector<std::int64_t> snapshot_times(const Scenario& sc, const std::vector<Behavior>& behaviors,
                                         std::int64_t end_time) {
  std::set<std::int64_t> t;
  for (std::size_t i = 0; i < behaviors.size(); ++i)
    for (int j = 0; j < behaviors[i].size(); ++j)
      if (!sc.agents[i].labels[behaviors[i].actions[j]].silent) t.insert(behaviors[i].t_start[j]);
  std::vector<std::int64_t> out(t.begin(), t.end());
  if (out.empty() || out.back() < end_time) out.push_back(end_time);
  return out;
}

std::string render_svg(const Scenario& sc, const std::vector<Behavior>& behaviors, std::int64_t until) {
  const GridSpec& g = *sc.agents[0].grid;
  const int w = g.width * kCell + 2 * kMargin, h = g.height * kCell + 2 * kMargin + 20;
  const int n = sc.num_agents();
  auto cx = [&](int x) { return kMargin + x * kCell + kCell / 2; };
  auto cy = [&](int y) { return kMargin + y * kCell + kCell / 2; };

  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w << "\" height=\"" << h << "\" viewBox=\"0 0 " << w
     << " " << h << "\">\n";
  os << "<rect x=\"0\" y=\"0\" width=\"" << w << "\" height=\"" << h << "\" fill=\"white\"/>\n";

  // Cell grid and walls.
  os << "<g stroke=\"#dddddd\" stroke-width=\"1\">\n";
  for (int x = 0; x <= g.width; ++x)
    os << "<line x1=\"" << kMargin + x * kCell << "\" y1=\"" << kMargin << "\" x2=\"" << kMargin + x * kCell
       << "\" y2=\"" << kMargin + g.height * kCell << "\"/>\n";
  for (int y = 0; y <= g.height; ++y)
    os << "<line x1=\"" << kMargin << "\" y1=\"" << kMargin + y * kCell << "\" x2=\"" << kMargin + g.width * kCell
       << "\" y2=\"" << kMargin + y * kCell << "\"/>\n";
  os << "</g>\n<g stroke=\"black\" stroke-width=\"3\" class=\"walls\">\n";
  os << "<rect x=\"" << kMargin << "\" y=\"" << kMargin << "\" width=\"" << g.width * kCell << "\" height=\""
     << g.height * kCell << "\" fill=\"none\"/>\n";
  auto wall = [&](int x1, int y1, int x2, int y2) {
    os << "<line x1=\"" << kMargin + x1 * kCell << "\" y1=\"" << kMargin + y1 * kCell << "\" x2=\""
       << kMargin + x2 * kCell << "\" y2=\"" << kMargin + y2 * kCell << "\"/>\n";
  };
  for (const auto& r : g.hwalls) wall(r[1], r[0], r[2] + 1, r[0]);
  for (const auto& r : g.vwalls) wall(r[0], r[1], r[0], r[2] + 1);
  for (const auto& r : g.walls) {
    if (r[0] == r[2]) wall(r[0], std::max(r[1], r[3]), r[0] + 1, std::max(r[1], r[3]));
    else wall(std::max(r[0], r[2]), r[1], std::max(r[0], r[2]), r[1] + 1);
  }
  os << "</g>\n";

  // Service cells, skipped for agents that serve nearly everywhere.
  os << "<g font-family=\"monospace\" font-size=\"8\" class=\"service-cells\">\n";
  for (int i = 0; i < n; ++i) {
    const auto& gs = sc.agents[i].grid->services;
    if (static_cast<int>(gs.size()) * 4 > g.width * g.height) continue;
    for (const auto& s : gs) {
      std::string names;
      for (const auto& nm : s.services) names += (names.empty() ? "" : ",") + nm;
      os << "<text x=\"" << kMargin + s.x * kCell + 2 << "\" y=\"" << kMargin + s.y * kCell + 9 + 8 * (i % 3)
         << "\" fill=\"" << color(i) << "\">" << escape(names) << "</text>\n";
    }
  }
  os << "</g>\n";

  // Traces: the start cell, then every cell reached by an action finished by `until`.
  for (int i = 0; i < n; ++i) {
    const auto& b = behaviors[i];
    const auto& gi = *sc.agents[i].grid;
    const int d = offset(i, n);
    os << "<polyline class=\"trace\" data-agent=\"" << escape(sc.agents[i].id) << "\" fill=\"none\" stroke=\""
       << color(i) << "\" stroke-width=\"2\" stroke-opacity=\"0.8\" points=\"";
    os << cx(gi.cell_x(b.states[0])) + d << "," << cy(gi.cell_y(b.states[0])) + d;
    for (int j = 0; j < b.size() && b.t_end[j] <= until; ++j)
      if (b.states[j + 1] != b.states[j])
        os << " " << cx(gi.cell_x(b.states[j + 1])) + d << "," << cy(gi.cell_y(b.states[j + 1])) + d;
    os << "\"/>\n";
  }

  // One marker per non-silent action started by `until`.
  for (int i = 0; i < n; ++i) {
    const auto& b = behaviors[i];
    const auto& gi = *sc.agents[i].grid;
    const int d = offset(i, n);
    for (int j = 0; j < b.size() && b.t_start[j] <= until; ++j) {
      const Label& l = sc.agents[i].labels[b.actions[j]];
      if (l.silent) continue;
      os << "<circle class=\"service\" data-agent=\"" << escape(sc.agents[i].id) << "\" data-t=\"" << b.t_start[j]
         << "\" cx=\"" << cx(gi.cell_x(b.states[j])) + d << "\" cy=\"" << cy(gi.cell_y(b.states[j])) + d
         << "\" r=\"4\" fill=\"" << color(i) << "\"><title>" << escape(sc.services.set_string(l.services))
         << "</title></circle>\n";
    }
  }

  // Current positions and legend.
  for (int i = 0; i < n; ++i) {
    const auto& b = behaviors[i];
    const auto& gi = *sc.agents[i].grid;
    int s = b.states[0];
    for (int j = 0; j < b.size() && b.t_end[j] <= until; ++j) s = b.states[j + 1];
    const int d = offset(i, n);
    os << "<rect class=\"position\" x=\"" << cx(gi.cell_x(s)) + d - 5 << "\" y=\"" << cy(gi.cell_y(s)) + d - 5
       << "\" width=\"10\" height=\"10\" fill=\"none\" stroke=\"" << color(i) << "\" stroke-width=\"2\"/>\n";
  }
  os << "<text x=\"" << kMargin << "\" y=\"" << h - 8 << "\" font-family=\"monospace\" font-size=\"11\">t = " << until;
  for (int i = 0; i < n; ++i)
    os << "  <tspan fill=\"" << color(i) << "\">" << escape(sc.agents[i].id) << "</tspan>";
  os << "</text>\n</svg>\n";
  return os.str();
}

}  // namespace rhp
