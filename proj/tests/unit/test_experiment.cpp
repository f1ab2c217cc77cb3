#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include <gtest/gtest.h>

#include <boost/math/special_functions/erf.hpp>

#include "uavmob/experiment.hpp"
#include "uavmob/statistics.hpp"

namespace {

using namespace uavmob;
namespace fs = std::filesystem;

std::string slurp(const fs::path &path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

fs::path scratch(const std::string &name) {
  const auto dir = fs::temp_directory_path() / ("uavmob_test_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

TEST(FigurePlan, BuiltInDefaults) {
  EXPECT_EQ(figure_plan(3).models.size(), 3u);
  const auto four = figure_plan(4);
  ASSERT_EQ(four.models.size(), 3u);
  EXPECT_EQ(four.models[0].axes[0].sigma, 1.3);
  EXPECT_EQ(four.models[2].axes[1].beta, 10.0);
  EXPECT_EQ(figure_plan(5).models.size(), 4u);
  const auto six = figure_plan(6);
  EXPECT_EQ(six.analysis.gammas, (std::vector<double>{2.0, 3.0, 4.0}));
  EXPECT_EQ(six.models[0].axes[2].sigma, 0.01);
  EXPECT_THROW(figure_plan(7), std::invalid_argument);
}

TEST(FigurePlan, OverrideRelabelsAndRejectsUnknownKeys) {
  auto plan = figure_plan(4);
  apply_override(plan, "s", 0.5);
  for (const auto &model : plan.models) {
    EXPECT_EQ(model.axes[1].s, 0.5);
  }
  auto three = figure_plan(3);
  EXPECT_THROW(apply_override(three, "beta", 2.0), ConfigError);
}

TEST(RunFigure, DeterministicCsvOutput) {
  auto plan = figure_plan(4);
  plan.sim.samples = 400;
  plan.sim.seed = 11;
  const auto a = scratch("fig_a");
  const auto b = scratch("fig_b");
  const auto first = write_figure(plan, run_figure(plan), a);
  const auto second = write_figure(plan, run_figure(plan), b);
  ASSERT_EQ(first.size(), 3u);
  for (std::size_t i = 0; i < first.size(); ++i) {
    EXPECT_EQ(first[i].filename(), second[i].filename());
    EXPECT_EQ(slurp(first[i]), slurp(second[i]));
  }
  const auto text = slurp(first[0]);
  EXPECT_EQ(text.substr(0, text.find('\n')), "r,cdf_analytic,cdf_empirical");
  EXPECT_EQ(text.find('\r'), std::string::npos);
}

TEST(RunFigure, AnalyticColumnsAreDistributions) {
  auto plan = figure_plan(6);
  plan.sim.samples = 200;
  const auto curves = run_figure(plan);
  ASSERT_EQ(curves.size(), 3u);
  for (const auto &curve : curves) {
    for (std::size_t i = 0; i < curve.x.size(); ++i) {
      EXPECT_GE(curve.analytic[i], 0.0);
      EXPECT_LE(curve.analytic[i], 1.0);
      if (i > 0) {
        EXPECT_LT(curve.analytic[i], curve.analytic[i - 1]);
      }
    }
  }
  auto cdfs = figure_plan(3);
  cdfs.sim.samples = 200;
  for (const auto &curve : run_figure(cdfs)) {
    for (std::size_t i = 1; i < curve.x.size(); ++i) {
      EXPECT_GE(curve.analytic[i], curve.analytic[i - 1]);
    }
  }
}

TEST(Validate, DefaultConfigPasses) {
  auto config = parse_config("[model]\nalpha = 1\nsigma = 1\n[sim]\nsamples = 2000\n");
  const auto report = validate(config);
  EXPECT_TRUE(report.passed());
  EXPECT_EQ(report.failures(), 0u);
  EXPECT_GT(report.records.size(), 15u);
  std::ostringstream csv;
  report.write_csv(csv);
  EXPECT_EQ(csv.str().substr(0, csv.str().find('\n')), "name,metric,value,tolerance,pass,count");
}

TEST(Validate, CoarseStepFailsOnlyTheSimulationRecords) {
  auto config = parse_config("[model]\nalpha = 1\nsigma = 1\n[sim]\nsamples = 2000\ndt = 0.5\n");
  const auto report = validate(config);
  EXPECT_FALSE(report.passed());
  bool saw_ensemble = false;
  for (const auto &record : report.records) {
    const bool simulated = record.name.find("sde_") != std::string::npos;
    if (record.name.find("sde_ensemble") != std::string::npos) {
      saw_ensemble = true;
      EXPECT_FALSE(record.passed) << record.name << " " << record.value;
    } else if (!simulated) {
      EXPECT_TRUE(record.passed) << record.name;
    }
  }
  EXPECT_TRUE(saw_ensemble);
}

std::string gaussian_csv(double lambda, std::size_t n, const Eigen::Vector3d &offset, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, std::sqrt(lambda));
  std::ostringstream out;
  out.precision(17);
  out << "time,X,y,z\n";
  for (std::size_t i = 0; i < n; ++i) {
    out << i << ',' << normal(rng) + offset(0) << ',' << normal(rng) + offset(1) << ','
        << normal(rng) + offset(2) << '\n';
  }
  return out.str();
}

TEST(Ingest, GaussianAxesMatchNormalCdf) {
  const double lambda = 0.6;
  std::istringstream in(gaussian_csv(lambda, 10000, Eigen::Vector3d::Zero(), 3));
  const auto data = ingest_trajectory(in, Eigen::Vector3d::Zero());
  ASSERT_EQ(data.relative.size(), 10000u);
  auto normal_cdf = [&](double x) { return 0.5 * boost::math::erfc(-x / std::sqrt(2.0 * lambda)); };
  for (int axis = 0; axis < 3; ++axis) {
    EXPECT_LT(ks_distance(data.axes[axis], normal_cdf), 0.02) << "axis " << axis;
  }
  EXPECT_LT(std::abs(data.xy_z_correlation), 0.05);
  std::ostringstream out;
  write_ingest_cdfs(data, out);
  EXPECT_EQ(out.str().substr(0, out.str().find('\n')), "quantity,value,cdf_empirical,cdf_fit");
}

TEST(Ingest, TargetOffsetIsRemoved) {
  const Eigen::Vector3d offset(1.0, 1.0, 1.0);
  std::istringstream plain(gaussian_csv(0.3, 500, Eigen::Vector3d::Zero(), 8));
  std::istringstream shifted(gaussian_csv(0.3, 500, offset, 8));
  const auto a = ingest_trajectory(plain, Eigen::Vector3d::Zero());
  const auto b = ingest_trajectory(shifted, offset);
  ASSERT_EQ(a.radii.size(), b.radii.size());
  for (std::size_t i = 0; i < a.radii.size(); ++i) {
    EXPECT_NEAR(a.radii[i], b.radii[i], 1e-12);
  }
}

TEST(Ingest, Errors) {
  auto message = [](const std::string &text) {
    std::istringstream in(text);
    try {
      ingest_trajectory(in, Eigen::Vector3d::Zero());
    } catch (const std::runtime_error &e) {
      return std::string(e.what());
    }
    return std::string("no error");
  };
  EXPECT_NE(message("x,y,z\n").find("no data rows"), std::string::npos);
  EXPECT_NE(message("").find("empty"), std::string::npos);
  EXPECT_NE(message("x,y\n1,2\n").find("'z'"), std::string::npos);
  EXPECT_NE(message("x,y,z\n1,2,3\n1,abc,3\n").find("row 3"), std::string::npos);
  EXPECT_NE(message("x,y,z\n1,2\n").find("row 2"), std::string::npos);
  EXPECT_NE(message("x,y,z\n1,2,inf\n").find("row 2"), std::string::npos);
}

} // namespace
