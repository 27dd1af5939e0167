#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>
#include <unistd.h>

#include "qset_cli/cli.hpp"
#include "qset_cli/config.hpp"

namespace {

namespace fs = std::filesystem;
using qset::cli::Json;

class CliCommands : public ::testing::Test {
protected:
    void SetUp() override {
        const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
        dir_ = fs::temp_directory_path() / ("qset_cli_" + std::to_string(::getpid()) + "_" + info->name());
        fs::remove_all(dir_);
        fs::create_directories(dir_);
    }
    void TearDown() override { fs::remove_all(dir_); }

    fs::path write_config(const std::string& name, const Json& j) const {
        const fs::path p = dir_ / name;
        std::ofstream(p) << j.dump(2);
        return p;
    }

    int run(std::vector<std::string> args) {
        args.insert(args.begin(), "qset");
        std::vector<const char*> argv;
        for (const auto& a : args) argv.push_back(a.c_str());
        out_.str("");
        err_.str("");
        return qset::cli::run(static_cast<int>(argv.size()), argv.data(), out_, err_);
    }

    fs::path dir_;
    std::ostringstream out_, err_;
};

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

Json read_json(const fs::path& p) { return Json::parse(slurp(p)); }

// Header names and numeric rows of a plain CSV file.
struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;
};

Table read_table(const fs::path& p) {
    std::ifstream in(p);
    Table t;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::stringstream ss(line);
        std::string cell;
        if (t.header.empty()) {
            while (std::getline(ss, cell, ',')) t.header.push_back(cell);
            continue;
        }
        std::vector<double> row;
        while (std::getline(ss, cell, ',')) row.push_back(std::stod(cell));
        t.rows.push_back(std::move(row));
    }
    return t;
}

Json short_run(double duration = 600.0) {
    Json j;
    j["run"]["duration_s"] = duration;
    j["run"]["dt_s"] = 0.1;
    return j;
}

TEST_F(CliCommands, SimulateIsByteIdenticalAcrossRuns) {
    const auto cfg = write_config("c.json", short_run());
    ASSERT_EQ(run({"simulate", "--config", cfg.string(), "--seed", "3", "--out", (dir_ / "a").string()}), 0);
    ASSERT_EQ(run({"simulate", "--config", cfg.string(), "--seed", "3", "--out", (dir_ / "b").string()}), 0);
    const std::string ta = slurp(dir_ / "a" / "trace.csv");
    EXPECT_FALSE(ta.empty());
    EXPECT_EQ(ta, slurp(dir_ / "b" / "trace.csv"));
    // The manifests differ only in the output directory they echo.
    Json ma = read_json(dir_ / "a" / "manifest.json");
    Json mb = read_json(dir_ / "b" / "manifest.json");
    ma["config"]["run"].erase("output_dir");
    mb["config"]["run"].erase("output_dir");
    EXPECT_EQ(ma.dump(), mb.dump());
}

TEST_F(CliCommands, SeedChangesTheTrace) {
    const auto cfg = write_config("c.json", short_run());
    ASSERT_EQ(run({"simulate", "--config", cfg.string(), "--seed", "3", "--out", (dir_ / "a").string()}), 0);
    ASSERT_EQ(run({"simulate", "--config", cfg.string(), "--seed", "4", "--out", (dir_ / "b").string()}), 0);
    EXPECT_NE(slurp(dir_ / "a" / "trace.csv"), slurp(dir_ / "b" / "trace.csv"));
}

TEST_F(CliCommands, SimulateTwelveHoursHas432001Samples) {
    const auto cfg = write_config("c.json", short_run(12 * 3600.0));
    ASSERT_EQ(run({"simulate", "--config", cfg.string(), "--out", dir_.string()}), 0) << err_.str();
    const Json m = read_json(dir_ / "manifest.json");
    EXPECT_EQ(m["outputs"]["samples"].get<std::size_t>(), 432001u);
    // Header plus one line per sample.
    const std::string text = slurp(dir_ / "trace.csv");
    EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 432002);
}

TEST_F(CliCommands, ManifestEchoesResolvedDefaults) {
    const auto cfg = write_config("c.json", short_run());
    ASSERT_EQ(run({"simulate", "--config", cfg.string(), "--out", dir_.string()}), 0);
    const Json m = read_json(dir_ / "manifest.json");
    EXPECT_EQ(m["command"], "simulate");
    EXPECT_DOUBLE_EQ(m["config"]["tlf"]["tau_bar_s"].get<double>(), 150.0);
    EXPECT_TRUE(m["config"]["operating_point"]["gate_charge_e"].is_number());
    EXPECT_EQ(m["config"]["run"]["seed"].get<int>(), 1);
}

TEST_F(CliCommands, MissingRequiredKeyIsAConfigError) {
    Json j;
    j["run"]["dt_s"] = 0.1;
    const auto cfg = write_config("c.json", j);
    EXPECT_EQ(run({"simulate", "--config", cfg.string(), "--out", dir_.string()}), 2);
    EXPECT_NE(err_.str().find("run.duration_s: missing required key"), std::string::npos) << err_.str();
    EXPECT_FALSE(fs::exists(dir_ / "trace.csv"));
}

TEST_F(CliCommands, UnknownKeyIsAConfigError) {
    Json j = short_run();
    j["tlf"]["tau"] = 3.0;
    const auto cfg = write_config("c.json", j);
    EXPECT_EQ(run({"simulate", "--config", cfg.string(), "--out", dir_.string()}), 2);
    EXPECT_NE(err_.str().find("tlf.tau: unknown key"), std::string::npos) << err_.str();
}

TEST_F(CliCommands, MalformedJsonIsAConfigError) {
    const fs::path p = dir_ / "bad.json";
    std::ofstream(p) << "{\"run\": ";
    EXPECT_EQ(run({"thermal", "--config", p.string(), "--out", dir_.string()}), 2);
}

TEST_F(CliCommands, BadUsageIsAConfigError) {
    EXPECT_EQ(run({}), 2);
    EXPECT_EQ(run({"reproduce", "fig9"}), 2);
    EXPECT_EQ(run({"simulate", "--config", (dir_ / "absent.json").string()}), 2);
}

TEST_F(CliCommands, AnalyzeCorruptCsvIsAnIoError) {
    const fs::path p = dir_ / "corrupt.csv";
    std::ofstream(p) << "time_s,current_A\n0,1e-10\n0.1,banana\n";
    EXPECT_EQ(run({"analyze", p.string(), "--out", dir_.string()}), 4);
    EXPECT_NE(err_.str().find("parse error"), std::string::npos) << err_.str();
}

TEST_F(CliCommands, AnalyzeMissingTraceIsAnIoError) {
    EXPECT_EQ(run({"analyze", (dir_ / "nope.csv").string(), "--out", dir_.string()}), 4);
}

TEST_F(CliCommands, AnalyzeWritesReportAndTables) {
    const auto cfg = write_config("c.json", short_run(4 * 3600.0));
    ASSERT_EQ(run({"simulate", "--config", cfg.string(), "--out", (dir_ / "sim").string()}), 0);
    const fs::path report = dir_ / "r.json";
    ASSERT_EQ(run({"analyze", (dir_ / "sim" / "trace.csv").string(), "--out", (dir_ / "an").string(),
                   "--psd-segment", "8192", "--report-out", report.string()}),
              0)
        << err_.str();
    const Json r = read_json(report);
    for (const char* key : {"tau_bar_s", "tau_L_s", "tau_R_s", "ratio", "delta_e_over_kt", "D_pA_per_sqrt_hour",
                            "sensitivity_e_per_sqrtHz", "fit", "diagnostics"}) {
        EXPECT_TRUE(r.contains(key)) << key;
    }
    EXPECT_GT(r["tau_bar_s"].get<double>(), 0.0);
    const Table psd = read_table(dir_ / "an" / "psd.csv");
    EXPECT_EQ(psd.header, (std::vector<std::string>{"frequency_Hz", "density_A2_per_Hz", "fit_A2_per_Hz", "averages"}));
    EXPECT_EQ(psd.rows.size(), 4096u);
    const Table h = read_table(dir_ / "an" / "histogram.csv");
    EXPECT_EQ(h.header, (std::vector<std::string>{"bin_low_A", "bin_high_A", "count"}));
    const Json m = read_json(dir_ / "an" / "manifest.json");
    EXPECT_EQ(m["config"]["analysis"]["psd_segment"].get<int>(), 8192);
}

TEST_F(CliCommands, ThermalAtZeroPowerHasEqualColumns) {
    Json j;
    j["thermal"]["p_set_W"] = 0.0;
    const auto cfg = write_config("c.json", j);
    ASSERT_EQ(run({"thermal", "--config", cfg.string(), "--out", dir_.string()}), 0) << err_.str();
    const Table t = read_table(dir_ / "curve.csv");
    EXPECT_EQ(t.header, (std::vector<std::string>{"t_ph_K", "t_e_K", "q_eph_W", "q_qp_W"}));
    ASSERT_EQ(t.rows.size(), 100u);
    for (const auto& row : t.rows) EXPECT_EQ(row[0], row[1]);
}

TEST_F(CliCommands, ThermalDefaultCurvePlateausThenMerges) {
    ASSERT_EQ(run({"thermal", "--out", dir_.string()}), 0) << err_.str();
    const Table t = read_table(dir_ / "curve.csv");
    const auto& first = t.rows.front();
    const auto& last = t.rows.back();
    EXPECT_GT(first[1] / first[0], 10.0);
    EXPECT_LT(last[1] / last[0] - 1.0, 0.05);
    // The overheating shrinks as the bath warms.
    for (std::size_t i = 1; i < t.rows.size(); ++i) {
        EXPECT_LT(t.rows[i][1] - t.rows[i][0], t.rows[i - 1][1] - t.rows[i - 1][0]);
    }
    const Json s = read_json(dir_ / "thermal.json");
    EXPECT_NEAR(s["eph_asymptote_K"].get<double>(), 0.5612, 1e-3);
}

TEST_F(CliCommands, ThermalWithSubstrateField) {
    Json j;
    j["substrate"]["enabled"] = true;
    j["substrate"]["check_refinement"] = false;
    const auto cfg = write_config("c.json", j);
    ASSERT_EQ(run({"thermal", "--config", cfg.string(), "--out", dir_.string()}), 0) << err_.str();
    const Json s = read_json(dir_ / "thermal.json");
    const auto& sub = s["substrate"];
    EXPECT_NEAR(sub["boundary_flux_W"].get<double>() / sub["power_W"].get<double>(), 1.0, 0.01);
    const Table f = read_table(dir_ / "substrate_field.csv");
    EXPECT_EQ(f.rows.size(), sub["grid"]["nr"].get<std::size_t>() * sub["grid"]["nz"].get<std::size_t>());
}

TEST_F(CliCommands, DeviceSummaryAndTransferCurve) {
    ASSERT_EQ(run({"device", "--out", dir_.string()}), 0) << err_.str();
    const Json s = read_json(dir_ / "device.json");
    EXPECT_NEAR(s["features"]["v_djqp_mV"].get<double>(), 0.3483, 1e-3);
    EXPECT_NEAR(s["charging_energy_ueV"].get<double>(), 174.15, 0.05);
    const Table t = read_table(dir_ / "transfer.csv");
    ASSERT_EQ(t.rows.size(), 401u);
    // Two gate periods: the curve repeats after one electron.
    for (std::size_t k = 0; k + 200 < t.rows.size(); ++k) {
        EXPECT_NEAR(t.rows[k + 200][1] / t.rows[k][1], 1.0, 1e-9);
    }
}

TEST_F(CliCommands, ReproduceFig3Bundle) {
    ASSERT_EQ(run({"reproduce", "fig3", "--out", dir_.string()}), 0) << err_.str();
    const Json r = read_json(dir_ / "report.json");
    const Table he = read_table(dir_ / "fig3_helium.csv");
    EXPECT_EQ(he.rows.size(), 29u);
    for (const char* name : {"fig3_empty.csv", "fig3d.csv", "manifest.json"}) EXPECT_TRUE(fs::exists(dir_ / name));
    EXPECT_FALSE(r.empty());
}

}  // namespace
