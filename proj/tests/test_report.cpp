#include "utb/report.hpp"
#include "utb/runner.hpp"

#include "test_util.hpp"

#include <unistd.h>

#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace utb;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int line_count(const std::string& s) {
  int n = 0;
  for (char c : s) n += c == '\n' ? 1 : 0;
  return n;
}

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("utb_test_" + std::to_string(::getpid()) + "_" + name);
  fs::remove_all(p);
  return p;
}

bool same_double(double a, double b) { return std::memcmp(&a, &b, sizeof a) == 0 || (std::isnan(a) && std::isnan(b)); }

RunConfig config_from(const std::string& text) { return parse_config_text(text); }

const char* kSlantConfig = R"json({
  "structure": {"c1": 4, "c2": 4, "d1": 0, "lambda": 1, "a1": 1},
  "surface": {"kind": "sphere", "radius": 1},
  "curve": {"base": {"kind": "small_circle", "colatitude": 1.0, "length": 2.0},
            "lift": {"kind": "slant", "c": 0.5, "phi0": 0.3}},
  "run": {"samples": 60}
})json";

const char* kProp31Config = R"json({
  "structure": {"c1": 4, "c2": 4, "d1": 0, "lambda": 1, "a1": 1},
  "surface": {"kind": "sphere", "radius": 1},
  "family": [
    {"base": {"kind": "small_circle", "colatitude": 0.6}, "lift": {"kind": "slant", "c": 0.5, "phi0": 0.3}},
    {"base": {"kind": "great_circle"}, "lift": {"kind": "slant", "c": 0.5, "phi0": 0.3, "sign": -1}},
    {"base": {"kind": "custom", "x1": "1.2+0.3*sin(s)", "x2": "s"}, "lift": {"kind": "legendre"}}
  ],
  "run": {"samples": 80}
})json";

const char* kPlaneLineConfig = R"json({
  "structure": {"c1": 4, "c2": 4, "d1": 0, "lambda": 1, "a1": 1},
  "surface": {"kind": "plane"},
  "curve": {"base": {"kind": "geodesic", "point": [0, 0], "velocity": [1, 0], "length": 2.0},
            "lift": {"kind": "parallel", "angle": 1.0471975511965976}},
  "run": {"samples": 60}
})json";

std::vector<SampleRow> sample_rows() {
  std::vector<SampleRow> rows(3);
  for (int i = 0; i < 3; ++i) {
    SampleRow& r = rows[i];
    r.s = 0.1 * i + 1.0 / 3.0;
    r.cos_theta_fp = std::sqrt(2.0) / (i + 1);
    r.cos_theta_paper = r.cos_theta_fp + 1e-17;
    r.t_xi = 0.5 + 1e-13 * i;
    r.n_xi_direct = -1e-11 * i;
    r.n_xi_formula_plus = std::exp(-i);
    r.n_xi_formula_minus = -1e-11 * i + 3e-12;
    r.kappa_tilde = 1.0 / 7.0;
    r.tau_tilde = -2.0 / 3.0;
    r.beta_paper = 0.25 * i;
    r.beta_fp = 0.25 * i + 1e-15;
  }
  return rows;
}

}  // namespace

TEST(Numbers, SeventeenDigitsRoundTrip) {
  for (double v : {1.0 / 3.0, -2.0 / 7.0, 1e-300, 6.02214076e23, 0.1}) {
    EXPECT_EQ(std::stod(format_number(v)), v);
  }
  EXPECT_EQ(format_number(2.0), "2");
  EXPECT_EQ(format_number(std::nan("")), "nan");
  EXPECT_EQ(format_number(-HUGE_VAL), "-inf");
}

TEST(Json, FloatsKeepFullPrecisionAndNonFiniteBecomesNull) {
  const json j = {{"a", 1.0 / 3.0}, {"b", 2.0}, {"c", std::nan("")}, {"d", 3}};
  const json back = json::parse(format_json(j));
  EXPECT_EQ(back["a"].get<double>(), 1.0 / 3.0);
  EXPECT_TRUE(back["b"].is_number_float());
  EXPECT_TRUE(back["c"].is_null());
  EXPECT_TRUE(back["d"].is_number_integer());
}

TEST(Csv, HeaderIsExact) {
  const std::string csv = samples_csv(sample_rows());
  EXPECT_EQ(csv.substr(0, csv.find('\n')),
            "s,cos_theta_fp,cos_theta_paper,t_xi,n_xi_direct,n_xi_formula_plus,n_xi_formula_minus,kappa_tilde,"
            "tau_tilde,beta_paper,beta_fp");
  EXPECT_EQ(line_count(csv), 4);
}

TEST(Csv, ValuesRoundTripExactly) {
  std::vector<SampleRow> rows = sample_rows();
  rows[1].n_xi_direct = std::nan("");
  rows[2].kappa_tilde = HUGE_VAL;
  const std::vector<SampleRow> back = parse_samples_csv(samples_csv(rows));
  ASSERT_EQ(back.size(), rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (double SampleRow::*f : {&SampleRow::s, &SampleRow::cos_theta_fp, &SampleRow::cos_theta_paper, &SampleRow::t_xi,
                                  &SampleRow::n_xi_direct, &SampleRow::n_xi_formula_plus, &SampleRow::n_xi_formula_minus,
                                  &SampleRow::kappa_tilde, &SampleRow::tau_tilde, &SampleRow::beta_paper,
                                  &SampleRow::beta_fp}) {
      EXPECT_TRUE(same_double(back[i].*f, rows[i].*f));
    }
  }
}

TEST(Csv, MalformedInputIsParseError) {
  EXPECT_EQ(error_kind_of([] { parse_samples_csv("s,t\n1,2\n"); }), ErrorKind::ParseError);
  const std::string bad = std::string(kSamplesHeader) + "\n1,2,3\n";
  EXPECT_EQ(error_kind_of([&] { parse_samples_csv(bad); }), ErrorKind::ParseError);
}

TEST(ExitCodes, Contract) {
  EXPECT_EQ(exit_code_for(Verdict::Pass), 0);
  EXPECT_EQ(exit_code_for(Verdict::Fail), 2);
  EXPECT_EQ(exit_code_for(Verdict::HypothesisNotMet), 3);
  EXPECT_EQ(exit_code_for(ErrorKind::ValidationError), 4);
  EXPECT_EQ(exit_code_for(ErrorKind::ParseError), 4);
  EXPECT_EQ(exit_code_for(ErrorKind::PositivityViolation), 4);
  EXPECT_EQ(exit_code_for(ErrorKind::NegativeRadicand), 5);
  EXPECT_EQ(exit_code_for(ErrorKind::VanishingCurvature), 5);
}

TEST(AtomicWrite, ReplacesContentWithoutLeftovers) {
  const fs::path dir = scratch("atomic");
  fs::create_directories(dir);
  write_atomic(dir / "a.txt", "first");
  write_atomic(dir / "a.txt", "second");
  EXPECT_EQ(slurp(dir / "a.txt"), "second");
  int files = 0;
  for (const auto& e : fs::directory_iterator(dir)) files += e.is_regular_file() ? 1 : 0;
  EXPECT_EQ(files, 1);
  fs::remove_all(dir);
}

TEST(AtomicWrite, MissingDirectoryIsIoError) {
  EXPECT_EQ(error_kind_of([] { write_atomic("/nonexistent/utb/a.txt", "x"); }), ErrorKind::IoError);
}

class ClassifyRun : public ::testing::Test {
 protected:
  static const RunSummary& summary() {
    static const RunSummary s = run_classify(config_from(kSlantConfig));
    return s;
  }
};

TEST_F(ClassifyRun, ReportsAlphaAndVerdicts) {
  const json& d = summary().document;
  EXPECT_DOUBLE_EQ(d["structure"]["alpha"].get<double>(), 1.0);
  EXPECT_EQ(d["verdicts"]["t_verdict"], "slant");
  EXPECT_EQ(d["verdicts"]["n_verdict"], "N-Legendre");
  EXPECT_EQ(summary().exit_code, 0);
}

TEST_F(ClassifyRun, EmitsThreeFilesWithOneRowPerSample) {
  const fs::path dir = scratch("classify");
  emit_outputs(summary(), dir);
  EXPECT_TRUE(fs::exists(dir / "summary.json"));
  EXPECT_TRUE(fs::exists(dir / "report.txt"));
  ASSERT_TRUE(fs::exists(dir / "samples.csv"));
  EXPECT_EQ(line_count(slurp(dir / "samples.csv")), 61);
  emit_outputs(summary(), dir);
  int files = 0;
  for (const auto& e : fs::directory_iterator(dir)) files += e.is_regular_file() ? 1 : 0;
  EXPECT_EQ(files, 3);
  fs::remove_all(dir);
}

TEST_F(ClassifyRun, SummaryRoundTripsExactly) {
  const ParsedSummary a = parse_summary(format_json(summary().document));
  const ParsedSummary b = summary_fields(summary().document);
  EXPECT_EQ(a.command, b.command);
  EXPECT_EQ(a.verdicts, b.verdicts);
  ASSERT_EQ(a.residual_maxima.size(), b.residual_maxima.size());
  ASSERT_FALSE(a.residual_maxima.empty());
  for (std::size_t i = 0; i < a.residual_maxima.size(); ++i) {
    EXPECT_EQ(a.residual_maxima[i].first, b.residual_maxima[i].first);
    EXPECT_TRUE(same_double(a.residual_maxima[i].second, b.residual_maxima[i].second)) << a.residual_maxima[i].first;
  }
}

TEST_F(ClassifyRun, SummaryNumbersAreRecomputableFromCsv) {
  const std::vector<SampleRow> rows = parse_samples_csv(samples_csv(summary().samples));
  const ParsedSummary from_csv = summary_fields(json{{"command", "classify"}, {"residual_maxima", evidence_maxima(rows)}});
  const ParsedSummary from_doc = parse_summary(format_json(summary().document));
  ASSERT_EQ(from_csv.residual_maxima.size(), from_doc.residual_maxima.size());
  for (std::size_t i = 0; i < from_csv.residual_maxima.size(); ++i) {
    EXPECT_EQ(from_csv.residual_maxima[i].first, from_doc.residual_maxima[i].first);
    EXPECT_TRUE(same_double(from_csv.residual_maxima[i].second, from_doc.residual_maxima[i].second))
        << from_csv.residual_maxima[i].first;
  }
}

TEST(Runs, RepeatedRunsGiveIdenticalCsv) {
  const RunConfig cfg = config_from(kSlantConfig);
  EXPECT_EQ(samples_csv(run_classify(cfg).samples), samples_csv(run_classify(cfg).samples));
}

TEST(Runs, Prop31ScenarioPasses) {
  const RunSummary s = run_verify(config_from(kProp31Config), "3.1");
  EXPECT_EQ(s.document["verdicts"]["3.1"], "pass");
  EXPECT_EQ(s.exit_code, 0);
  EXPECT_TRUE(s.emit_samples);
  EXPECT_EQ(static_cast<int>(s.samples.size()), 80);
}

TEST(Runs, PlaneLineParallelLiftIsSlantAndNLegendre) {
  const RunSummary s = run_classify(config_from(kPlaneLineConfig));
  EXPECT_EQ(s.document["verdicts"]["t_verdict"], "slant");
  EXPECT_EQ(s.document["verdicts"]["n_verdict"], "N-Legendre");
}

TEST(Runs, HypothesisNotMetSuppressesSamples) {
  std::string text = kProp31Config;
  text.replace(text.find("\"c2\": 4"), 7, "\"c2\": 2");
  text.replace(text.find("\"a1\": 1"), 7, "\"a1\": 1.4142135623730951");
  const RunSummary s = run_verify(config_from(text), "3.1");
  EXPECT_EQ(s.exit_code, 3);
  EXPECT_FALSE(s.emit_samples);
  const fs::path dir = scratch("gate");
  fs::create_directories(dir);
  std::ofstream(dir / "samples.csv") << "stale\n";
  emit_outputs(s, dir);
  EXPECT_FALSE(fs::exists(dir / "samples.csv"));
  EXPECT_NE(slurp(dir / "summary.json").find("hypothesis-not-met"), std::string::npos);
  fs::remove_all(dir);
}

TEST(Runs, UnknownPropositionIsValidationError) {
  EXPECT_EQ(error_kind_of([] { run_verify(config_from(kSlantConfig), "3.5"); }), ErrorKind::ValidationError);
}

TEST(Runs, ClassifyWithoutCurveIsValidationError) {
  EXPECT_EQ(error_kind_of([] { run_classify(config_from(kProp31Config)); }), ErrorKind::ValidationError);
}

TEST(Runs, NormalizationGapsAreFlaggedOffCanonicalParams) {
  std::string text = kSlantConfig;
  text.replace(text.find("\"lambda\": 1"), 11, "\"lambda\": 2");
  const RunSummary s = run_classify(config_from(text));
  ASSERT_FALSE(s.document["warnings"].empty());
  for (const auto& w : s.document["warnings"]) EXPECT_NE(s.report.find(w.get<std::string>()), std::string::npos);
}
