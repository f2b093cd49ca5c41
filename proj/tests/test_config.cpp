#include <brwp/config.hpp>

#include <algorithm>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include <brwp/errors.hpp>

namespace {

using brwp::ExperimentConfig;
using brwp::ExperimentKind;
using brwp::KernelVariant;
using brwp::SamplerKind;

const char* kMixtureText = R"(# two-cluster sampling run
experiment = mixture
dims = 20
n_particles = 50
n_iters = 500
h = 0.02
lambda = 0.1
seed = 7

[mixture]
n_centers = 4
sigma = 4
)";

std::string error_message(const std::string& text,
                          const std::vector<std::string>& overrides = {}) {
  try {
    brwp::parse_config_text(text, "test.cfg", overrides);
  } catch (const brwp::config_error& e) {
    return e.what();
  }
  return "";
}

TEST(ParseConfig, ReadsSectionsAndScalars) {
  const ExperimentConfig cfg =
      brwp::parse_config_text(kMixtureText, "test.cfg");
  EXPECT_EQ(cfg.experiment, ExperimentKind::mixture);
  EXPECT_EQ(cfg.sampler, SamplerKind::brwp);
  EXPECT_EQ(cfg.kernel_variant, KernelVariant::delta);
  EXPECT_EQ(cfg.dims, 20);
  EXPECT_EQ(cfg.n_particles, 50);
  EXPECT_EQ(cfg.n_iters, 500);
  EXPECT_DOUBLE_EQ(cfg.h, 0.02);
  EXPECT_DOUBLE_EQ(cfg.lambda, 0.1);
  EXPECT_EQ(cfg.seed, 7u);
  EXPECT_EQ(cfg.mixture.n_centers, 4);
  EXPECT_DOUBLE_EQ(cfg.mixture.sigma, 4.0);
  EXPECT_DOUBLE_EQ(cfg.mixture.box, 10.0);  // untouched default
}

TEST(ParseConfig, CanonicalTextRoundTrips) {
  const ExperimentConfig cfg =
      brwp::parse_config_text(kMixtureText, "test.cfg");
  const std::string canon = brwp::canonical_config_text(cfg);
  const ExperimentConfig back = brwp::parse_config_text(canon, "canon");
  EXPECT_EQ(brwp::canonical_config_text(back), canon);
  EXPECT_EQ(brwp::config_hash(back), brwp::config_hash(cfg));
}

TEST(ParseConfig, MissingRequiredKeyNamesTheKey) {
  const std::string msg = error_message(
      "experiment = mixture\ndims = 2\nn_particles = 10\nn_iters = 5\n"
      "lambda = 0\nseed = 1\n");
  EXPECT_NE(msg.find("missing required key 'h'"), std::string::npos) << msg;
}

TEST(ParseConfig, UnknownKeyIsRejectedWithLineNumber) {
  const std::string text = std::string(kMixtureText) + "step_size = 0.5\n";
  const std::string msg = error_message(text);
  EXPECT_NE(msg.find("unknown key 'mixture.step_size'"), std::string::npos)
      << msg;
  EXPECT_NE(msg.find("test.cfg:"), std::string::npos) << msg;
}

TEST(ParseConfig, CollectsAllProblemsInOneThrow) {
  const std::string msg = error_message(
      "experiment = mixture\n"
      "dims = not_a_number\n"
      "n_particles = 10\n"
      "n_iter = 5\n"  // misspelled key
      "h = 0.1\n"
      "lambda = 0\n"
      "seed = 1\n");
  EXPECT_NE(msg.find("expected integer"), std::string::npos) << msg;
  EXPECT_NE(msg.find("unknown key 'n_iter'"), std::string::npos) << msg;
  EXPECT_NE(msg.find("missing required key 'n_iters'"), std::string::npos)
      << msg;
  EXPECT_GE(std::count(msg.begin(), msg.end(), '\n'), 2);
}

TEST(ParseConfig, ReportsLineNumbersOfOffendingEntries) {
  const std::string msg = error_message("experiment = mixture\nh = zero\n");
  EXPECT_NE(msg.find("test.cfg:2: key 'h'"), std::string::npos) << msg;
}

TEST(ParseConfig, RangeViolationsAreReported) {
  std::string text(kMixtureText);
  const std::string msg = error_message(text, {"h=-0.5"});
  EXPECT_NE(msg.find("h must be > 0"), std::string::npos) << msg;
}

TEST(ParseConfig, DuplicateKeyIsAnError) {
  const std::string msg =
      error_message(std::string(kMixtureText) + "\nsigma = 2\nsigma = 3\n");
  EXPECT_NE(msg.find("duplicate key 'mixture.sigma'"), std::string::npos)
      << msg;
}

TEST(ParseConfig, OverridesReplaceFileValuesIncludingSections) {
  const ExperimentConfig cfg = brwp::parse_config_text(
      kMixtureText, "test.cfg", {"h=0.05", "mixture.sigma=2", "seed=99"});
  EXPECT_DOUBLE_EQ(cfg.h, 0.05);
  EXPECT_DOUBLE_EQ(cfg.mixture.sigma, 2.0);
  EXPECT_EQ(cfg.seed, 99u);
}

TEST(ParseConfig, MalformedOverrideIsAnError) {
  const std::string msg = error_message(kMixtureText, {"h0.05"});
  EXPECT_NE(msg.find("override must be key=value"), std::string::npos) << msg;
}

TEST(ParseConfig, EnumValuesParseAndBadOnesListAlternatives) {
  const ExperimentConfig cfg = brwp::parse_config_text(
      kMixtureText, "test.cfg", {"sampler=myula", "kernel_variant=gaussian"});
  EXPECT_EQ(cfg.sampler, SamplerKind::myula);
  EXPECT_EQ(cfg.kernel_variant, KernelVariant::gaussian);

  const std::string msg = error_message(kMixtureText, {"sampler=hmc"});
  EXPECT_NE(msg.find("unknown value 'hmc'"), std::string::npos) << msg;
  EXPECT_NE(msg.find("brwp, myula"), std::string::npos) << msg;
}

TEST(ParseConfig, GeneralKernelVariantIsNotAvailableFromText) {
  const std::string msg = error_message(kMixtureText, {"kernel_variant=general"});
  EXPECT_NE(msg.find("unknown value 'general'"), std::string::npos) << msg;
}

TEST(ParseConfig, TvExperimentDerivesDimsAndRejectsMyula) {
  const char* tv_text =
      "experiment = l12tv_denoise\n"
      "n_particles = 20\n"
      "n_iters = 10\n"
      "h = 0.1\n"
      "lambda = 5\n"
      "seed = 3\n"
      "[imaging]\n"
      "rows = 8\n"
      "cols = 16\n";
  const ExperimentConfig cfg = brwp::parse_config_text(tv_text, "tv.cfg");
  EXPECT_EQ(cfg.dims, 8 * 16);

  const std::string msg = error_message(tv_text, {"sampler=myula"});
  EXPECT_NE(msg.find("only sampler = brwp"), std::string::npos) << msg;
}

TEST(ParseConfig, KernelValidationNeedsOnlySeed) {
  const ExperimentConfig cfg = brwp::parse_config_text(
      "experiment = kernel_validation\nseed = 11\n", "kv.cfg");
  EXPECT_EQ(cfg.experiment, ExperimentKind::kernel_validation);
  EXPECT_EQ(cfg.seed, 11u);
}

TEST(ConfigHash, StableAcrossCallsAndSensitiveToChanges) {
  const ExperimentConfig a = brwp::parse_config_text(kMixtureText, "a");
  const ExperimentConfig b = brwp::parse_config_text(kMixtureText, "b");
  EXPECT_EQ(brwp::config_hash(a), brwp::config_hash(b));

  const ExperimentConfig c =
      brwp::parse_config_text(kMixtureText, "c", {"seed=8"});
  EXPECT_NE(brwp::config_hash(a), brwp::config_hash(c));
}

TEST(ConfigProblems, FlagsProgrammaticMisconfiguration) {
  ExperimentConfig cfg;
  cfg.h = 0.0;
  cfg.kernel_variant = KernelVariant::general;
  const std::vector<std::string> problems = brwp::config_problems(cfg);
  ASSERT_GE(problems.size(), 2u);
}

TEST(ParseConfigFile, MissingFileThrows) {
  EXPECT_THROW(brwp::parse_config_file("/nonexistent/dir/x.cfg"),
               brwp::config_error);
}

}  // namespace
