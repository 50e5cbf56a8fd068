#include "expboot/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <charconv>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include "expboot/euler_lagrange.hpp"
#include "expboot/scheme.hpp"

namespace expboot::cli {

namespace {

using Json = nlohmann::ordered_json;

constexpr const char* kHypothesesNote =
    "smallness hypotheses of the gain estimates are assumed, not checked; estimate constants are not modelled";

std::string trim(std::string_view s) {
  auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string_view::npos) return {};
  auto end = s.find_last_not_of(" \t\r");
  return std::string(s.substr(begin, end - begin + 1));
}

Rational parse_cli_rational(std::string_view text, std::string_view flag) {
  try {
    return parse_rational(trim(text));
  } catch (const ParseError&) {
    throw UsageError(std::string(flag) + ": cannot parse '" + std::string(text) + "' as a rational");
  }
}

// "name=value" pairs from repeated --start / --param flags.
std::map<std::string, Exponent> parse_assignments(const std::vector<std::string>& items, std::string_view flag) {
  std::map<std::string, Exponent> out;
  for (const auto& item : items) {
    auto eq = item.find('=');
    if (eq == std::string::npos || eq == 0) {
      throw UsageError(std::string(flag) + ": expected name=value, got '" + item + "'");
    }
    std::string value = trim(std::string_view(item).substr(eq + 1));
    try {
      out.insert_or_assign(trim(std::string_view(item).substr(0, eq)), Exponent::parse(value));
    } catch (const ParseError&) {
      throw UsageError(std::string(flag) + ": cannot parse '" + value + "'");
    }
  }
  return out;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DomainError("cannot read '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::string fixed(double v, int precision) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::fixed, precision);
  return std::string(buf, res.ptr);
}

std::string decimal_or_empty(const std::optional<Exponent>& e, int digits) {
  return e ? e->to_decimal(digits) : std::string();
}

Json meta(const RunConfig& config) {
  Json m;
  m["digits"] = config.digits;
  m["version"] = kVersion;
  m["hypotheses"] = kHypothesesNote;
  return m;
}

Json classification_json(const Classification& c, int digits) {
  Json r;
  r["regime"] = to_string(c.regime);
  if (c.stall) {
    r["q_star"] = c.stall->q_star.to_string();
    r["t_star"] = c.stall->t_star.to_string();
  }
  r["map"] = c.map_space.to_string();
  r["spinor"] = c.spinor_space.to_string();
  Json dec;
  if (c.stall) {
    dec["q_star"] = c.stall->q_star.to_decimal(digits);
    dec["t_star"] = c.stall->t_star.to_decimal(digits);
  }
  dec["map"] = c.map_space.to_decimal(digits);
  dec["spinor"] = c.spinor_space.to_decimal(digits);
  r["decimal"] = dec;
  return r;
}

Json state_record(int k, const std::string& rule, const std::string& tag, const RegularityState& s, int digits) {
  Json j;
  j["k"] = k;
  if (!rule.empty()) j["rule"] = rule;
  j["case"] = tag;
  j["q"] = s.q.to_string();
  j["t"] = s.t.to_string();
  j["q_decimal"] = s.q.to_decimal(digits);
  j["t_decimal"] = s.t.to_decimal(digits);
  return j;
}

void write_trace(const IterationTrace& trace, const Json& summary, const RunConfig& config, std::ostream& out) {
  if (config.format == OutputFormat::csv) {
    out << "k,case,q,t,q_decimal,t_decimal\n";
    auto row = [&](int k, const std::string& tag, const RegularityState& s) {
      out << k << ',' << tag << ',' << s.q.to_string() << ',' << s.t.to_string() << ','
          << s.q.to_decimal(config.digits) << ',' << s.t.to_decimal(config.digits) << '\n';
    };
    row(0, case_tag::kStart, trace.start);
    for (const auto& step : trace.steps) row(step.k, step.case_tag, step.outgoing);
    out << ',' << trace.terminal << ",,,,\n";
    return;
  }
  out << state_record(0, "", case_tag::kStart, trace.start, config.digits).dump() << '\n';
  for (const auto& step : trace.steps) {
    out << state_record(step.k, step.rule, step.case_tag, step.outgoing, config.digits).dump() << '\n';
  }
  out << summary.dump() << '\n';
}

Json scheme_values(const std::vector<std::pair<std::string, scheme::Value>>& values) {
  Json j = Json::object();
  for (const auto& [name, v] : values) j[name] = v.to_string();
  return j;
}

Json scheme_decimals(const std::vector<std::pair<std::string, scheme::Value>>& values, int digits) {
  Json j = Json::object();
  for (const auto& [name, v] : values) j[name] = v.to_decimal(digits);
  return j;
}

void write_scheme_trace(const scheme::SchemeTrace& trace, const RunConfig& config, std::ostream& out) {
  if (config.format == OutputFormat::text) {
    out << scheme::serialize(trace, config.digits);
    return;
  }
  Json first;
  first["k"] = 0;
  first["state"] = scheme_values(trace.initial);
  first["decimal"] = scheme_decimals(trace.initial, config.digits);
  out << first.dump() << '\n';
  for (const auto& step : trace.steps) {
    Json j;
    j["k"] = step.k;
    j["state"] = scheme_values(step.state);
    j["lets"] = scheme_values(step.lets);
    j["decimal"] = scheme_decimals(step.state, config.digits);
    out << j.dump() << '\n';
  }
  Json last;
  last["terminal"] = trace.terminal;
  last["steps"] = trace.steps.size();
  last["warnings"] = trace.warnings;
  out << last.dump() << '\n';
}

BootstrapOptions bootstrap_options(const RunConfig& config) {
  BootstrapOptions opts;
  opts.max_steps = config.max_steps;
  opts.witness_tolerance = pow10(-config.digits);
  return opts;
}

// Regime-two witness traces converge geometrically; the tolerance is the
// rendering precision so the last row agrees with q_- to every digit shown.
IterationTrace figure_trace(const Exponent& p, const RunConfig& config) {
  if (p.is_infinite()) throw DomainError("trace figures need finite p");
  try {
    return bootstrap_run(p, bootstrap_options(config)).trace;
  } catch (const MaxStepsError& e) {
    return e.partial_trace();
  }
}

std::vector<Rational> sample_grid(const Rational& p_min, const Rational& p_max, int samples) {
  if (samples < 1) throw DomainError("samples must be >= 1");
  if (p_min > p_max) throw DomainError("p-min exceeds p-max");
  std::vector<Rational> grid;
  grid.reserve(static_cast<std::size_t>(samples));
  for (int i = 0; i < samples; ++i) {
    if (samples == 1) {
      grid.push_back(p_min);
    } else {
      Rational step = (p_max - p_min) / Rational(samples - 1);
      grid.push_back(Rational(p_min + step * Rational(i)));
    }
  }
  return grid;
}

struct Series {
  std::string label;
  std::string color;
  std::vector<std::pair<double, double>> points;
};

std::string render_svg(const std::vector<Series>& series, const std::optional<double>& rule, const std::string& title,
                       const std::string& x_label) {
  constexpr double kWidth = 640, kHeight = 400, kLeft = 60, kRight = 620, kTop = 30, kBottom = 360;
  double x0 = 0, x1 = 1, y0 = 0, y1 = 1;
  bool any = false;
  auto extend = [&](double x, double y) {
    if (!any) {
      x0 = x1 = x;
      y0 = y1 = y;
      any = true;
    }
    x0 = std::min(x0, x);
    x1 = std::max(x1, x);
    y0 = std::min(y0, y);
    y1 = std::max(y1, y);
  };
  for (const auto& s : series) {
    for (auto [x, y] : s.points) extend(x, y);
  }
  if (rule) {
    y0 = any ? std::min(y0, *rule) : *rule;
    y1 = any ? std::max(y1, *rule) : *rule;
  }
  if (x1 == x0) x1 = x0 + 1;
  if (y1 == y0) y1 = y0 + 1;
  double pad = (y1 - y0) * 0.05;
  y0 -= pad;
  y1 += pad;
  auto sx = [&](double x) { return kLeft + (x - x0) / (x1 - x0) * (kRight - kLeft); };
  auto sy = [&](double y) { return kBottom - (y - y0) / (y1 - y0) * (kBottom - kTop); };

  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 " << kWidth << ' ' << kHeight << "\" width=\""
      << kWidth << "\" height=\"" << kHeight << "\">\n";
  out << "<rect x=\"0\" y=\"0\" width=\"" << kWidth << "\" height=\"" << kHeight << "\" fill=\"white\"/>\n";
  out << "<text x=\"" << kLeft << "\" y=\"20\" font-size=\"14\">" << title << "</text>\n";
  out << "<line x1=\"" << kLeft << "\" y1=\"" << kBottom << "\" x2=\"" << kRight << "\" y2=\"" << kBottom
      << "\" stroke=\"black\"/>\n";
  out << "<line x1=\"" << kLeft << "\" y1=\"" << kTop << "\" x2=\"" << kLeft << "\" y2=\"" << kBottom
      << "\" stroke=\"black\"/>\n";
  out << "<text x=\"" << kRight << "\" y=\"" << kBottom + 25 << "\" font-size=\"12\" text-anchor=\"end\">" << x_label
      << " [" << fixed(x0, 4) << ", " << fixed(x1, 4) << "]</text>\n";
  out << "<text x=\"5\" y=\"" << kBottom << "\" font-size=\"10\">" << fixed(y0, 4) << "</text>\n";
  out << "<text x=\"5\" y=\"" << kTop << "\" font-size=\"10\">" << fixed(y1, 4) << "</text>\n";
  if (rule) {
    out << "<line x1=\"" << kLeft << "\" y1=\"" << fixed(sy(*rule), 2) << "\" x2=\"" << kRight << "\" y2=\""
        << fixed(sy(*rule), 2) << "\" stroke=\"#d62728\" stroke-dasharray=\"6 4\"/>\n";
    out << "<text x=\"" << kRight << "\" y=\"" << fixed(sy(*rule) - 4, 2)
        << "\" font-size=\"12\" text-anchor=\"end\" fill=\"#d62728\">Q0</text>\n";
  }
  int index = 0;
  for (const auto& s : series) {
    out << "<polyline fill=\"none\" stroke=\"" << s.color << "\" points=\"";
    for (std::size_t i = 0; i < s.points.size(); ++i) {
      out << (i ? " " : "") << fixed(sx(s.points[i].first), 2) << ',' << fixed(sy(s.points[i].second), 2);
    }
    out << "\"/>\n";
    out << "<text x=\"" << kLeft + 10 << "\" y=\"" << kTop + 15 + 15 * index << "\" font-size=\"12\" fill=\""
        << s.color << "\">" << s.label << "</text>\n";
    ++index;
  }
  out << "</svg>\n";
  return out.str();
}

std::string p_slug(const Exponent& p) {
  std::string s = p.to_string();
  for (char& c : s) {
    if (c == '/') c = '_';
  }
  return s;
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw std::runtime_error("cannot write '" + path.string() + "'");
  f << content;
  if (!f) throw std::runtime_error("cannot write '" + path.string() + "'");
}

}  // namespace

OutputFormat parse_format(std::string_view text) {
  if (text == "json") return OutputFormat::json;
  if (text == "csv") return OutputFormat::csv;
  if (text == "svg") return OutputFormat::svg;
  if (text == "text") return OutputFormat::text;
  throw UsageError("unknown format '" + std::string(text) + "' (json, csv, svg, text)");
}

RunConfig load_config(const std::filesystem::path& path, RunConfig base) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read config file '" + path.string() + "'");
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::string body = trim(line);
    if (body.empty()) continue;
    auto eq = body.find('=');
    if (eq == std::string::npos) {
      throw UsageError(path.string() + ":" + std::to_string(line_no) + ": expected key = value");
    }
    std::string key = trim(std::string_view(body).substr(0, eq));
    std::string value = trim(std::string_view(body).substr(eq + 1));
    auto as_int = [&]() {
      int v = 0;
      auto res = std::from_chars(value.data(), value.data() + value.size(), v);
      if (res.ec != std::errc() || res.ptr != value.data() + value.size()) {
        throw UsageError(path.string() + ":" + std::to_string(line_no) + ": '" + key + "' needs an integer");
      }
      return v;
    };
    if (key == "digits") {
      base.digits = as_int();
    } else if (key == "max_steps") {
      base.max_steps = as_int();
    } else if (key == "output_dir") {
      base.output_dir = value;
    } else if (key == "format") {
      base.format = parse_format(value);
    } else {
      throw UsageError(path.string() + ":" + std::to_string(line_no) + ": unknown key '" + key + "'");
    }
  }
  return base;
}

Exponent parse_p(std::string_view text) {
  std::string t = trim(text);
  if (t == "inf") return Exponent::infinity();
  Rational r = parse_cli_rational(t, "--p");
  if (r <= 0) throw UsageError("--p must be positive");
  return Exponent(r);
}

std::string fixed_points_csv(const Rational& p_min, const Rational& p_max, int samples, int digits) {
  std::ostringstream out;
  out << "p,q_minus,q_plus,Q0\n";
  for (const Rational& p : sample_grid(p_min, p_max, samples)) {
    FixedPointReport r = fixed_points(Exponent(p));
    out << QuadraticSurd(p).to_decimal(digits) << ',' << decimal_or_empty(r.q_minus, digits) << ','
        << decimal_or_empty(r.q_plus, digits) << ',' << r.barrier.to_decimal(digits) << '\n';
  }
  return out.str();
}

std::string fixed_points_svg(const Rational& p_min, const Rational& p_max, int samples) {
  Series minus{"q_minus", "#1f77b4", {}};
  Series plus{"q_plus", "#2ca02c", {}};
  Series barrier{"Q0", "#d62728", {}};
  for (const Rational& p : sample_grid(p_min, p_max, samples)) {
    FixedPointReport r = fixed_points(Exponent(p));
    double x = p.get_d();
    if (r.q_minus) minus.points.emplace_back(x, r.q_minus->value().to_double());
    if (r.q_plus) plus.points.emplace_back(x, r.q_plus->value().to_double());
    barrier.points.emplace_back(x, r.barrier.value().to_double());
  }
  return render_svg({minus, plus, barrier}, std::nullopt, "fixed points of Q and the barrier Q0", "p");
}

std::string trace_csv(const Exponent& p, const RunConfig& config) {
  IterationTrace trace = figure_trace(p, config);
  const std::string q0 = q_barrier(p).to_decimal(config.digits);
  std::ostringstream out;
  out << "k,q_k,t_k,Q0\n";
  auto row = [&](int k, const RegularityState& s) {
    out << k << ',' << s.q.to_decimal(config.digits) << ',' << s.t.to_decimal(config.digits) << ',' << q0 << '\n';
  };
  row(0, trace.start);
  for (const auto& step : trace.steps) row(step.k, step.outgoing);
  return out.str();
}

std::string trace_svg(const Exponent& p, const RunConfig& config) {
  IterationTrace trace = figure_trace(p, config);
  Series q{"q_k", "#1f77b4", {}};
  q.points.emplace_back(0.0, trace.start.q.value().to_double());
  for (const auto& step : trace.steps) q.points.emplace_back(step.k, step.outgoing.q.value().to_double());
  return render_svg({q}, q_barrier(p).value().to_double(), "bootstrap trace, p = " + p.to_string(), "k");
}

std::vector<std::filesystem::path> emit_figure(FigureKind kind, const FigureParams& params, const RunConfig& config) {
  std::error_code ec;
  std::filesystem::create_directories(config.output_dir, ec);
  if (ec || !std::filesystem::is_directory(config.output_dir)) {
    throw std::runtime_error("cannot create output directory '" + config.output_dir.string() + "'");
  }
  const bool svg = params.svg || config.format == OutputFormat::svg;
  std::vector<std::filesystem::path> written;
  if (kind == FigureKind::fixed_points) {
    auto csv = config.output_dir / "fixed_points.csv";
    write_file(csv, fixed_points_csv(params.p_min, params.p_max, params.samples, config.digits));
    written.push_back(csv);
    if (svg) {
      auto path = config.output_dir / "fixed_points.svg";
      write_file(path, fixed_points_svg(params.p_min, params.p_max, params.samples));
      written.push_back(path);
    }
  } else {
    const std::string stem = "trace_p" + p_slug(params.p);
    auto csv = config.output_dir / (stem + ".csv");
    write_file(csv, trace_csv(params.p, config));
    written.push_back(csv);
    if (svg) {
      auto path = config.output_dir / (stem + ".svg");
      write_file(path, trace_svg(params.p, config));
      written.push_back(path);
    }
  }
  return written;
}

int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Exact exponent bootstrap calculator", "expboot"};
  app.require_subcommand(1);

  std::string config_path;
  int digits = 0;
  int max_steps = 0;
  std::string output_dir;
  std::string format_text;
  app.add_option("--config", config_path, "key = value config file");
  auto* digits_opt = app.add_option("--digits", digits, "decimal digits in renderings (default 12)");
  auto* steps_opt = app.add_option("--max-steps", max_steps, "iteration budget (default 10000)");
  auto* dir_opt = app.add_option("--output-dir", output_dir, "write figure files here instead of stdout");
  auto* format_opt = app.add_option("--format", format_text, "json | csv | svg | text");

  std::string p_text;
  auto* classify = app.add_subcommand("classify", "classify a gravitino exponent p");
  classify->add_option("--p", p_text, "rational or inf")->required();

  std::string scheme_name = "abstract";
  std::vector<std::string> start_items;
  std::vector<std::string> param_items;
  auto* trace = app.add_subcommand("trace", "emit an iteration trace");
  trace->add_option("--p", p_text, "rational or inf")->required();
  trace->add_option("--scheme", scheme_name, "abstract | el | path to a .scm-exp file");
  trace->add_option("--start", start_items, "override a start value, name=value");
  trace->add_option("--param", param_items, "extra scheme parameter, name=value");

  auto* fixed_point = app.add_subcommand("fixed-point", "fixed points of the map-gain iteration");
  fixed_point->add_option("--p", p_text, "rational")->required();

  std::string p_min_text;
  std::string p_max_text;
  int samples = 100;
  bool svg = false;
  auto* figure = app.add_subcommand("figure", "figure data");
  figure->require_subcommand(1);
  auto* figure_fp = figure->add_subcommand("fixed-points", "q_minus, q_plus and Q0 over a p range");
  figure_fp->add_option("--p-min", p_min_text)->required();
  figure_fp->add_option("--p-max", p_max_text)->required();
  figure_fp->add_option("--samples", samples);
  figure_fp->add_flag("--svg", svg, "also render SVG");
  auto* figure_trace_cmd = figure->add_subcommand("trace", "q_k, t_k along the bootstrap");
  figure_trace_cmd->add_option("--p", p_text)->required();
  figure_trace_cmd->add_flag("--svg", svg, "also render SVG");

  std::string scheme_file;
  auto* scheme_cmd = app.add_subcommand("scheme", "scheme definition language");
  scheme_cmd->require_subcommand(1);
  auto* scheme_run = scheme_cmd->add_subcommand("run", "parse and run a scheme file");
  scheme_run->add_option("--file", scheme_file, "path to a .scm-exp file")->required();
  scheme_run->add_option("--param", param_items, "name=value");
  scheme_run->add_option("--start", start_items, "override a state initializer, name=value");

  for (CLI::App* sub : {classify, trace, fixed_point, figure, figure_fp, figure_trace_cmd, scheme_cmd, scheme_run}) {
    sub->fallthrough();
  }

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n";
    return 2;
  }

  RunConfig config;
  try {
    if (!config_path.empty()) config = load_config(config_path, config);
    if (digits_opt->count() > 0) config.digits = digits;
    if (steps_opt->count() > 0) config.max_steps = max_steps;
    if (dir_opt->count() > 0) config.output_dir = output_dir;
    if (format_opt->count() > 0) config.format = parse_format(format_text);
    if (config.digits < 1) throw UsageError("digits must be >= 1");
    if (config.max_steps < 1) throw UsageError("max-steps must be >= 1");

    if (classify->parsed()) {
      Exponent p = parse_p(p_text);
      BootstrapOptions opts = bootstrap_options(config);
      // Only the classification is printed; the witness is not needed.
      opts.witness_tolerance = 1000;
      BootstrapResult abstract = bootstrap_run(p, opts);
      Json result = classification_json(abstract.classification, config.digits);
      Json el;
      if (abstract.classification.stall) {
        CoupledResult coupled = el_run(p, opts);
        el["k_star"] = coupled.k_star;
        el["map"] = coupled.classification.map_space.to_string();
        el["spinor"] = coupled.classification.spinor_space.to_string();
      } else {
        el["k_star"] = 0;
        el["map"] = abstract.classification.map_space.to_string();
        el["spinor"] = abstract.classification.spinor_space.to_string();
      }
      result["euler_lagrange"] = el;
      result["notes"] = abstract.classification.notes;
      Json doc;
      doc["command"] = "classify";
      doc["input"] = Json{{"p", p.to_string()}};
      doc["result"] = result;
      doc["meta"] = meta(config);
      out << doc.dump() << '\n';
      return 0;
    }

    if (fixed_point->parsed()) {
      Exponent p = parse_p(p_text);
      FixedPointReport r = fixed_points(p);
      Json result;
      result["radicand"] = r.radicand.to_exact_string();
      if (r.q_minus) {
        result["roots"] = Json{{"q_minus", r.q_minus->to_string()}, {"q_plus", r.q_plus->to_string()}};
      } else {
        result["roots"] = nullptr;
      }
      result["discriminant_sign"] = to_string(r.discriminant_sign);
      result["barrier"] = r.barrier.to_string();
      result["critical"] = r.critical.to_exact_string();
      Json dec;
      dec["radicand"] = r.radicand.to_decimal(config.digits);
      if (r.q_minus) {
        dec["q_minus"] = r.q_minus->to_decimal(config.digits);
        dec["q_plus"] = r.q_plus->to_decimal(config.digits);
      }
      dec["barrier"] = r.barrier.to_decimal(config.digits);
      dec["critical"] = r.critical.to_decimal(config.digits);
      result["decimal"] = dec;
      Json doc;
      doc["command"] = "fixed-point";
      doc["input"] = Json{{"p", p.to_string()}};
      doc["result"] = result;
      doc["meta"] = meta(config);
      out << doc.dump() << '\n';
      return 0;
    }

    if (trace->parsed()) {
      Exponent p = parse_p(p_text);
      auto start = parse_assignments(start_items, "--start");
      auto extra = parse_assignments(param_items, "--param");
      BootstrapOptions opts = bootstrap_options(config);
      if (scheme_name == "abstract" || scheme_name == "el") {
        for (const auto& [name, _] : start) {
          if (name != "q" && name != "t") throw UsageError("--start accepts q=... and t=...");
        }
        if (!start.empty()) {
          RegularityState s;
          s.p = p;
          if (start.count("q")) s.q = start.at("q");
          if (start.count("t")) s.t = start.at("t");
          opts.start = s;
        }
      }
      if (scheme_name == "abstract") {
        BootstrapResult r;
        try {
          r = bootstrap_run(p, opts);
        } catch (const MaxStepsError& e) {
          write_trace(e.partial_trace(), Json{{"terminal", "max-steps"}}, config, out);
          throw;
        }
        Json summary;
        summary["terminal"] = r.trace.terminal;
        summary["steps"] = r.trace.steps.size();
        summary["Q0"] = q_barrier(p).to_string();
        summary["classification"] = classification_json(r.classification, config.digits);
        write_trace(r.trace, summary, config, out);
        return 0;
      }
      if (scheme_name == "el") {
        CoupledResult r;
        if (opts.start) {
          if (!start.count("t")) opts.start->t = spinor_after(p, opts.start->q);
          r = el_run_from(*opts.start);
        } else {
          r = el_run(p, opts);
        }
        Json summary;
        summary["terminal"] = r.trace.terminal;
        summary["k_star"] = r.k_star;
        summary["Q0"] = q_barrier(p).to_string();
        summary["classification"] = classification_json(r.classification, config.digits);
        write_trace(r.trace, summary, config, out);
        return 0;
      }
      std::string source;
      if (auto builtin = scheme::builtin_source(scheme_name)) {
        source = std::string(*builtin);
      } else {
        source = read_file(scheme_name);
      }
      scheme::SchemeAst ast = scheme::parse_scheme(source);
      extra.insert_or_assign("p", p);
      scheme::RunOptions run_opts{config.max_steps, start};
      write_scheme_trace(scheme::run_scheme(ast, extra, run_opts), config, out);
      return 0;
    }

    if (figure_fp->parsed() || figure_trace_cmd->parsed()) {
      FigureParams params;
      params.svg = svg;
      FigureKind kind = figure_fp->parsed() ? FigureKind::fixed_points : FigureKind::trace;
      if (kind == FigureKind::fixed_points) {
        params.p_min = parse_cli_rational(p_min_text, "--p-min");
        params.p_max = parse_cli_rational(p_max_text, "--p-max");
        params.samples = samples;
      } else {
        params.p = parse_p(p_text);
      }
      if (!config.output_dir.empty()) {
        for (const auto& path : emit_figure(kind, params, config)) out << path.string() << '\n';
        return 0;
      }
      const bool as_svg = svg || config.format == OutputFormat::svg;
      if (kind == FigureKind::fixed_points) {
        out << (as_svg ? fixed_points_svg(params.p_min, params.p_max, params.samples)
                       : fixed_points_csv(params.p_min, params.p_max, params.samples, config.digits));
      } else {
        out << (as_svg ? trace_svg(params.p, config) : trace_csv(params.p, config));
      }
      return 0;
    }

    if (scheme_run->parsed()) {
      auto params = parse_assignments(param_items, "--param");
      auto start = parse_assignments(start_items, "--start");
      scheme::SchemeAst ast = scheme::parse_scheme(read_file(scheme_file));
      scheme::RunOptions run_opts{config.max_steps, start};
      write_scheme_trace(scheme::run_scheme(ast, params, run_opts), config, out);
      return 0;
    }
    err << "usage error: no command\n";
    return 2;
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const scheme::SchemeMaxStepsError& e) {
    write_scheme_trace(e.partial_trace(), config, out);
    err << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace expboot::cli
