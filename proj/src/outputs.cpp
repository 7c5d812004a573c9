#include "xlris/outputs.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

namespace xlris {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.15g", v);
  if (std::strtod(buf, nullptr) == v) return buf;
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace {

double percentile(const std::vector<double>& sorted, double q) {
  if (sorted.empty()) return 0.0;
  if (sorted.size() == 1) return sorted[0];
  double pos = q * (sorted.size() - 1);
  std::size_t lo = static_cast<std::size_t>(std::floor(pos));
  if (lo + 1 >= sorted.size()) return sorted.back();
  double frac = pos - lo;
  return sorted[lo] * (1.0 - frac) + sorted[lo + 1] * frac;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write file: " + path);
  return f;
}

} // namespace

std::vector<SummaryRow> summarize(const SweepResult& r) {
  std::map<double, std::pair<std::vector<double>, int>> groups;  // rates, total
  for (const auto& row : r.rows) {
    auto& g = groups[row.sweep_value];
    ++g.second;
    if (row.status != "infeasible") g.first.push_back(row.rate_bits);
  }
  std::vector<SummaryRow> out;
  for (auto& [value, g] : groups) {
    auto& rates = g.first;
    std::sort(rates.begin(), rates.end());
    SummaryRow s;
    s.sweep_value = value;
    s.skip_fraction =
        g.second ? 1.0 - static_cast<double>(rates.size()) / g.second : 0.0;
    if (!rates.empty()) {
      double sum = 0;
      for (double x : rates) sum += x;
      s.mean = sum / rates.size();
      s.median = percentile(rates, 0.5);
      s.p10 = percentile(rates, 0.1);
      s.p90 = percentile(rates, 0.9);
    }
    out.push_back(s);
  }
  return out;
}

void write_raw_csv(const SweepResult& r, const std::string& path) {
  auto f = open_out(path);
  f << "sweep_value,trial,seed,rate_bits,rate_user,rate_eve,iters,status\n";
  for (const auto& row : r.rows) {
    f << format_double(row.sweep_value) << ',' << row.trial << ',' << row.seed
      << ',' << format_double(row.rate_bits) << ','
      << format_double(row.rate_user) << ',' << format_double(row.rate_eve)
      << ',' << row.iters << ',' << row.status << '\n';
  }
}

void write_summary_csv(const SweepResult& r, const std::string& path) {
  auto f = open_out(path);
  f << "sweep_value,mean,median,p10,p90,skip_fraction\n";
  for (const auto& s : summarize(r)) {
    f << format_double(s.sweep_value) << ',' << format_double(s.mean) << ','
      << format_double(s.median) << ',' << format_double(s.p10) << ','
      << format_double(s.p90) << ',' << format_double(s.skip_fraction) << '\n';
  }
}

namespace {

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                          "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"};

std::string svg_num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

std::string xml_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

} // namespace

void write_svg(const std::vector<SweepResult>& results,
               const std::string& title, const std::string& path) {
  const double W = 860, H = 520;
  const double ml = 70, mr = 20, mt = 40, mb = 55;

  std::vector<std::vector<SummaryRow>> stats;
  double xmin = 1e300, xmax = -1e300, ymin = 0.0, ymax = -1e300;
  for (const auto& r : results) {
    stats.push_back(summarize(r));
    for (const auto& s : stats.back()) {
      xmin = std::min(xmin, s.sweep_value);
      xmax = std::max(xmax, s.sweep_value);
      ymin = std::min(ymin, s.p10);
      ymax = std::max(ymax, s.p90);
    }
  }
  bool empty = !(xmax >= xmin) || !(ymax > -1e300);
  if (empty) { xmin = 0; xmax = 1; ymin = 0; ymax = 1; }
  if (xmax == xmin) { xmin -= 1; xmax += 1; }
  if (ymax <= ymin) ymax = ymin + 1;
  double ypad = 0.05 * (ymax - ymin);
  ymax += ypad;

  auto X = [&](double v) {
    return ml + (v - xmin) / (xmax - xmin) * (W - ml - mr);
  };
  auto Y = [&](double v) {
    return H - mb - (v - ymin) / (ymax - ymin) * (H - mt - mb);
  };

  auto f = open_out(path);
  f << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W
    << "\" height=\"" << H << "\" viewBox=\"0 0 " << W << ' ' << H << "\">\n";
  f << "<rect width=\"" << W << "\" height=\"" << H << "\" fill=\"white\"/>\n";
  f << "<text x=\"" << W / 2 << "\" y=\"24\" text-anchor=\"middle\" "
       "font-family=\"sans-serif\" font-size=\"16\">"
    << xml_escape(title) << "</text>\n";

  // Grid and ticks.
  for (int i = 0; i <= 5; ++i) {
    double xv = xmin + (xmax - xmin) * i / 5.0;
    double yv = ymin + (ymax - ymin) * i / 5.0;
    f << "<line x1=\"" << X(xv) << "\" y1=\"" << mt << "\" x2=\"" << X(xv)
      << "\" y2=\"" << H - mb << "\" stroke=\"#dddddd\"/>\n";
    f << "<line x1=\"" << ml << "\" y1=\"" << Y(yv) << "\" x2=\"" << W - mr
      << "\" y2=\"" << Y(yv) << "\" stroke=\"#dddddd\"/>\n";
    f << "<text x=\"" << X(xv) << "\" y=\"" << H - mb + 18
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
         "font-size=\"11\">"
      << svg_num(xv) << "</text>\n";
    f << "<text x=\"" << ml - 8 << "\" y=\"" << Y(yv) + 4
      << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">"
      << svg_num(yv) << "</text>\n";
  }
  f << "<rect x=\"" << ml << "\" y=\"" << mt << "\" width=\"" << W - ml - mr
    << "\" height=\"" << H - mt - mb
    << "\" fill=\"none\" stroke=\"#444444\"/>\n";
  std::string xlabel = results.empty() ? "" : results.front().axis;
  f << "<text x=\"" << (ml + W - mr) / 2 << "\" y=\"" << H - 14
    << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">"
    << xml_escape(xlabel) << "</text>\n";
  f << "<text x=\"18\" y=\"" << (mt + H - mb) / 2
    << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\" "
       "transform=\"rotate(-90 18 "
    << (mt + H - mb) / 2 << ")\">secrecy rate (bits/s/Hz)</text>\n";

  for (std::size_t k = 0; k < stats.size(); ++k) {
    const auto& st = stats[k];
    if (st.empty()) continue;
    const char* color = kPalette[k % (sizeof kPalette / sizeof *kPalette)];
    // p10..p90 band
    std::ostringstream band;
    for (std::size_t i = 0; i < st.size(); ++i)
      band << (i ? " L" : "M") << svg_num(X(st[i].sweep_value)) << ' '
           << svg_num(Y(st[i].p90));
    for (std::size_t i = st.size(); i-- > 0;)
      band << " L" << svg_num(X(st[i].sweep_value)) << ' '
           << svg_num(Y(st[i].p10));
    band << " Z";
    f << "<path d=\"" << band.str() << "\" fill=\"" << color
      << "\" fill-opacity=\"0.12\" stroke=\"none\"/>\n";
    // median line + markers
    std::ostringstream line;
    for (std::size_t i = 0; i < st.size(); ++i)
      line << (i ? " " : "") << svg_num(X(st[i].sweep_value)) << ','
           << svg_num(Y(st[i].median));
    f << "<polyline points=\"" << line.str() << "\" fill=\"none\" stroke=\""
      << color << "\" stroke-width=\"2\"/>\n";
    for (const auto& s : st)
      f << "<circle cx=\"" << svg_num(X(s.sweep_value)) << "\" cy=\""
        << svg_num(Y(s.median)) << "\" r=\"3\" fill=\"" << color << "\"/>\n";
    // legend
    double ly = mt + 16 + 18 * static_cast<double>(k);
    f << "<line x1=\"" << ml + 10 << "\" y1=\"" << ly << "\" x2=\"" << ml + 34
      << "\" y2=\"" << ly << "\" stroke=\"" << color
      << "\" stroke-width=\"2\"/>\n";
    f << "<text x=\"" << ml + 40 << "\" y=\"" << ly + 4
      << "\" font-family=\"sans-serif\" font-size=\"12\">"
      << xml_escape(results[k].label) << "</text>\n";
  }
  if (empty)
    f << "<text x=\"" << W / 2 << "\" y=\"" << H / 2
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
         "font-size=\"14\">no data</text>\n";
  f << "</svg>\n";
}

void emit_outputs(const std::vector<SweepResult>& results,
                  const std::string& out_dir) {
  std::filesystem::create_directories(out_dir);
  for (const auto& r : results) {
    std::string stem = out_dir + "/" + r.label;
    write_raw_csv(r, stem + ".csv");
    write_summary_csv(r, stem + "_summary.csv");
    write_svg({r}, r.label, stem + ".svg");
  }
}

} // namespace xlris
