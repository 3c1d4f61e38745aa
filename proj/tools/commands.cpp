#include "commands.hpp"

#include "qmini/stability.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>

namespace qmini::cli {

namespace {

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.5e", v);
  return buf;
}

std::string fixed2(const std::optional<double>& v) {
  if (!v) return "";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", *v);
  return buf;
}

std::string join(const std::vector<std::string>& cells, OutputFormat format) {
  std::string line = format == OutputFormat::Markdown ? "| " : "";
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i > 0) line += format == OutputFormat::Markdown ? " | " : ",";
    line += cells[i];
  }
  if (format == OutputFormat::Markdown) line += " |";
  return line + "\n";
}

std::string format_table(const std::vector<std::string>& header,
                         const std::vector<std::vector<std::string>>& rows, OutputFormat format) {
  std::string s = join(header, format);
  if (format == OutputFormat::Markdown) {
    s += join(std::vector<std::string>(header.size(), "---"), format);
  }
  for (const auto& r : rows) s += join(r, format);
  return s;
}

struct Options {
  std::string bubble = "corner";
  int example = 0;
  int infsup_max_level = 4;
  int converge_max_level = 6;
  double shear = 0.0;
  std::string format = "csv";
  std::string out_path;
  bool with_seminorm = false;
  std::string load = "interpolated";
  std::string velocity_error = "vertex";
};

// Writes to --out if given, else to `out`.
int emit(const std::string& text, const Options& opts, std::ostream& out, std::ostream& err) {
  if (opts.out_path.empty()) {
    out << text;
    return kExitOk;
  }
  std::ofstream file(opts.out_path, std::ios::binary);
  if (!file) {
    err << "error: cannot open " << opts.out_path << " for writing\n";
    return kExitInvalid;
  }
  file << text;
  return kExitOk;
}

OutputFormat parse_format(const std::string& f) {
  return f == "markdown" ? OutputFormat::Markdown : OutputFormat::Csv;
}

int cmd_rank(const Options& opts, std::ostream& out, std::ostream& err) {
  const BubbleKind kind = *parse_bubble_kind(opts.bubble);
  const MacroMatrix d = build_macro_matrix(kind);
  const StabilityReport report = check_m1(kind);

  std::ostringstream os;
  os << "bubble: " << to_string(kind) << "\n";
  os << "macro matrix D (" << MacroMatrix::kRows << " x " << MacroMatrix::kCols << "):\n";
  std::size_t width = 0;
  for (int r = 0; r < MacroMatrix::kRows; ++r) {
    for (int c = 0; c < MacroMatrix::kCols; ++c) width = std::max(width, to_string(d.entries(r, c)).size());
  }
  for (int r = 0; r < MacroMatrix::kRows; ++r) {
    for (int c = 0; c < MacroMatrix::kCols; ++c) {
      const std::string cell = to_string(d.entries(r, c));
      os << std::string(width + 1 - cell.size(), ' ') << cell;
    }
    os << "   " << d.row_basis[static_cast<std::size_t>(r)] << "\n";
  }
  os << "columns:";
  for (const auto& c : d.col_basis) os << " " << c;
  os << "\n";
  os << "rank: " << report.rank << "\n";
  os << "dim B_i: " << report.dim_bi << "\n";
  os << (report.m1_satisfied ? "M1 HOLDS" : "M1 FAILS") << "\n";
  return emit(os.str(), opts, out, err);
}

int cmd_infsup(const Options& opts, std::ostream& out, std::ostream& err) {
  if (opts.infsup_max_level < 1 || opts.infsup_max_level > 4) {
    err << "error: infsup supports --max-level 1..4 (dense eigenanalysis), got " << opts.infsup_max_level << "\n";
    return kExitInvalid;
  }
  const BubbleKind kind = *parse_bubble_kind(opts.bubble);
  std::vector<std::vector<std::string>> rows;
  bool degenerate = false;
  for (int level = 1; level <= opts.infsup_max_level; ++level) {
    const Mesh mesh = build_structured_mesh(subdivisions_for_level(level), opts.shear);
    const DofMap dofs = build_dof_maps(mesh);
    const InfSupEstimate est = estimate_infsup(mesh, dofs, kind);
    degenerate = degenerate || est.beta <= 1e-5;
    rows.push_back({std::to_string(level), std::to_string(est.elements), sci(est.beta)});
  }
  if (degenerate) {
    err << "warning: beta_h <= 1e-5 for the " << to_string(kind)
        << " bubble: the discrete inf-sup condition fails (spurious pressure mode)\n";
  }
  return emit(format_table({"level", "n_elem", "beta_h"}, rows, parse_format(opts.format)), opts, out, err);
}

int cmd_converge(const Options& opts, std::ostream& out, std::ostream& err) {
  if (opts.converge_max_level < 1 || opts.converge_max_level > 6) {
    err << "error: converge supports --max-level 1..6, got " << opts.converge_max_level << "\n";
    return kExitInvalid;
  }
  const BubbleKind kind = *parse_bubble_kind(opts.bubble);
  const ExampleId id = opts.example == 1 ? ExampleId::Example1 : ExampleId::Example2;
  StudyProtocol protocol;
  protocol.load = opts.load == "quadrature" ? LoadRule::Quadrature : LoadRule::Interpolated;
  protocol.velocity_error = opts.velocity_error == "full" ? VelocityError::Full : VelocityError::VertexPart;
  const ErrorReport report = run_convergence_study(id, kind, opts.converge_max_level, opts.shear, protocol);
  if (report.status == SolveStatus::Singular) {
    err << "error: singular saddle-point system at level " << *report.singular_level << " with the "
        << to_string(kind) << " bubble";
    if (kind == BubbleKind::Standard || kind == BubbleKind::QuadSym) {
      err << " (expected: this bubble leaves a spurious pressure mode, so the discrete problem is singular)";
    }
    err << "\n";
    return kExitSingular;
  }
  return emit(format_report(report, parse_format(opts.format), opts.with_seminorm), opts, out, err);
}

}  // namespace

std::string format_report(const ErrorReport& report, OutputFormat format, bool with_seminorm) {
  std::vector<std::string> header = {"level", "n_elem", "h1_u", "h1_rate", "l2_u", "l2_rate", "l2_p", "p_rate"};
  if (with_seminorm) {
    header.emplace_back("h1_semi_u");
    header.emplace_back("h1_semi_rate");
  }
  const auto h1 = report.rates(&ErrorNorms::h1_u);
  const auto l2 = report.rates(&ErrorNorms::l2_u);
  const auto lp = report.rates(&ErrorNorms::l2_p);
  const auto hs = report.rates(&ErrorNorms::h1_semi_u);
  std::vector<std::vector<std::string>> rows;
  for (std::size_t i = 0; i < report.levels.size(); ++i) {
    const auto& l = report.levels[i];
    std::vector<std::string> row = {std::to_string(l.level), std::to_string(l.elements),
                                    sci(l.errors.h1_u), fixed2(h1[i]),
                                    sci(l.errors.l2_u), fixed2(l2[i]),
                                    sci(l.errors.l2_p), fixed2(lp[i])};
    if (with_seminorm) {
      row.push_back(sci(l.errors.h1_semi_u));
      row.push_back(fixed2(hs[i]));
    }
    rows.push_back(std::move(row));
  }
  return format_table(header, rows, format);
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Quadrilateral mini element for Stokes: stability checks and convergence studies", "qmini"};
  app.require_subcommand(1);
  Options opts;

  const std::vector<std::string> bubbles = {"standard", "corner", "linear", "quadsym"};
  const std::vector<std::string> formats = {"csv", "markdown"};
  auto add_bubble = [&](CLI::App* sub) {
    sub->add_option("--bubble", opts.bubble, "Bubble variant")->check(CLI::IsMember(bubbles));
  };
  auto add_mesh_output = [&](CLI::App* sub) {
    sub->add_option("--shear", opts.shear, "Mesh shear in [0, 0.5)")->check(CLI::Range(0.0, 0.4999999));
    sub->add_option("--format", opts.format, "Output format")->check(CLI::IsMember(formats));
    sub->add_option("--out", opts.out_path, "Write the table to PATH");
  };

  auto* rank = app.add_subcommand("rank", "Exact macro-element matrix, rank and M1 verdict");
  add_bubble(rank);
  rank->add_option("--out", opts.out_path, "Write the report to PATH");

  auto* infsup = app.add_subcommand("infsup", "Discrete inf-sup constant on levels 1..N");
  add_bubble(infsup);
  infsup->add_option("--max-level", opts.infsup_max_level, "Finest level (<= 4)")->capture_default_str();
  add_mesh_output(infsup);

  auto* converge = app.add_subcommand("converge", "Manufactured-solution convergence study");
  add_bubble(converge);
  converge->add_option("--example", opts.example, "Manufactured solution (1 or 2)")
      ->required()
      ->check(CLI::IsMember({1, 2}));
  converge->add_option("--max-level", opts.converge_max_level, "Finest level (<= 6)")->capture_default_str();
  converge->add_flag("--with-seminorm", opts.with_seminorm, "Append H1 seminorm columns");
  converge->add_option("--load", opts.load, "Load vector: interpolated (M_v f_I) or quadrature")
      ->check(CLI::IsMember({"interpolated", "quadrature"}));
  converge->add_option("--velocity-error", opts.velocity_error,
                       "Velocity error on the vertex part of u_h or on the full u_h")
      ->check(CLI::IsMember({"vertex", "full"}));
  add_mesh_output(converge);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(std::move(reversed));
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitInvalid;
  }

  try {
    if (rank->parsed()) return cmd_rank(opts, out, err);
    if (infsup->parsed()) return cmd_infsup(opts, out, err);
    return cmd_converge(opts, out, err);
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return kExitInvalid;
  }
}

}  // namespace qmini::cli
