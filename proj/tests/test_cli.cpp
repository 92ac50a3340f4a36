#include "test_support.hpp"

#include <gtest/gtest.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace nhbrach;

namespace {

struct Outcome {
    int code;
    std::string out;
    std::string err;
};

Outcome run_with(Command cmd, std::initializer_list<const char*> settings, unsigned jobs = 1) {
    RunConfig cfg;
    cfg.command = cmd;
    cfg.jobs = jobs;
    for (const char* kv : settings) apply_setting(cfg, kv);
    std::ostringstream out, err;
    const int code = run(cfg, out, err);
    return {code, out.str(), err.str()};
}

std::vector<std::vector<std::string>> rows_of(const std::string& csv) {
    std::vector<std::vector<std::string>> rows;
    std::istringstream in(csv);
    std::string line;
    while (std::getline(in, line)) rows.push_back(split_csv_line(line));
    return rows;
}

std::string first_line(const std::string& s) { return s.substr(0, s.find('\n')); }

int shell(const std::string& cmd) {
    const int st = std::system(cmd.c_str());
#ifdef WEXITSTATUS
    return WEXITSTATUS(st);
#else
    return st;
#endif
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

// parsing

TEST(Parse, ComplexLiterals) {
    EXPECT_EQ(*parse_complex("1.5"), cplx(1.5, 0.0));
    EXPECT_EQ(*parse_complex("-2"), cplx(-2.0, 0.0));
    EXPECT_EQ(*parse_complex("1+2j"), cplx(1.0, 2.0));
    EXPECT_EQ(*parse_complex("1-2j"), cplx(1.0, -2.0));
    EXPECT_EQ(*parse_complex("-3j"), cplx(0.0, -3.0));
    EXPECT_EQ(*parse_complex("j"), cplx(0.0, 1.0));
    EXPECT_EQ(*parse_complex("-j"), cplx(0.0, -1.0));
    EXPECT_EQ(*parse_complex("1e-3+2.5e2j"), cplx(1e-3, 250.0));
    EXPECT_EQ(*parse_complex(" 1E+2 - 1j "), cplx(100.0, -1.0));
    EXPECT_DOUBLE_EQ(parse_complex("pi")->real(), pi);
    EXPECT_DOUBLE_EQ(parse_complex("0.5pi")->real(), pi / 2);
    EXPECT_DOUBLE_EQ(parse_complex("0.5*pi")->real(), pi / 2);
    EXPECT_DOUBLE_EQ(parse_complex("-pi")->real(), -pi);
    const cplx z = *parse_complex("0.5pi+2j");
    EXPECT_DOUBLE_EQ(z.real(), pi / 2);
    EXPECT_DOUBLE_EQ(z.imag(), 2.0);
    for (const char* bad : {"", "abc", "1+", "1+2i", "1++2j", "2j+1j", "1.2.3", "nanx"})
        EXPECT_FALSE(parse_complex(bad).has_value()) << bad;
}

TEST(Parse, Grids) {
    const auto g = parse_grid("0, 1, 11");
    ASSERT_TRUE(g);
    EXPECT_EQ(g->count, 11u);
    EXPECT_DOUBLE_EQ(g->at(0), 0.0);
    EXPECT_DOUBLE_EQ(g->at(5), 0.5);
    EXPECT_EQ(g->at(10), 1.0);
    EXPECT_FALSE(parse_grid("0, 1"));
    EXPECT_FALSE(parse_grid("0, 1, 2.5"));
    EXPECT_FALSE(parse_grid("0, 1, x"));
    EXPECT_EQ(parse_grid("-pi, pi, 3")->at(1), 0.0);
}

TEST(Parse, ConfigStream) {
    RunConfig cfg;
    std::istringstream in("# comment\n  z = 1+1j  # trailing\n\nomega=2\n");
    read_config_stream(cfg, in);
    EXPECT_EQ(cfg.get_complex("z"), cplx(1.0, 1.0));
    EXPECT_EQ(cfg.get_real("omega"), 2.0);
    std::istringstream bad("z 1\n");
    EXPECT_THROW(read_config_stream(cfg, bad), error);
    EXPECT_THROW(apply_setting(cfg, "novalue"), error);
    EXPECT_THROW(apply_setting(cfg, "=3"), error);
}

TEST(Parse, Commands) {
    for (Command c : {Command::Compute, Command::Sweep, Command::Trajectory, Command::Verify, Command::Fig1,
                      Command::Fig2, Command::Fig3})
        EXPECT_EQ(*parse_command(to_string(c)), c);
    EXPECT_FALSE(parse_command("plot"));
}

// validation

TEST(Validation, ExitCodeOne) {
    EXPECT_EQ(run_with(Command::Compute, {}).code, 1);
    EXPECT_EQ(run_with(Command::Compute, {"z=1+"}).code, 1);
    EXPECT_EQ(run_with(Command::Compute, {"quantity=mass", "z=0"}).code, 1);
    EXPECT_EQ(run_with(Command::Compute, {"quantity=regime", "rho=1"}).code, 1);
    EXPECT_EQ(run_with(Command::Sweep, {"param1=re_theta", "param2=im_theta", "param1_grid=0.1,3,1",
                                        "param2_grid=-1,1,3"})
                  .code,
              1);
    EXPECT_EQ(run_with(Command::Sweep, {"param1=re_theta", "param2=im_theta", "param1_grid=3,0.1,4",
                                        "param2_grid=-1,1,3"})
                  .code,
              1);
    EXPECT_EQ(run_with(Command::Sweep, {"param1=re_theta", "param2=im_z", "param1_grid=0.1,3,4",
                                        "param2_grid=-1,1,3"})
                  .code,
              1);
    EXPECT_EQ(run_with(Command::Sweep, {"param1=re_theta", "param2=im_theta", "param1_grid=0.1,3,4"}).code, 1);
    EXPECT_EQ(run_with(Command::Trajectory, {"theta=1"}).code, 1);
    EXPECT_EQ(run_with(Command::Trajectory, {"theta=1", "t_end=-1"}).code, 1);
    EXPECT_EQ(run_with(Command::Trajectory, {"t_end=1"}).code, 1);
    RunConfig cfg;
    cfg.command = Command::Verify;
    cfg.jobs = 0;
    std::ostringstream o, e;
    EXPECT_EQ(run(cfg, o, e), 1);
    EXPECT_NE(e.str().find("invalid configuration"), std::string::npos);
}

TEST(Validation, ErrorClassesMapToExitCodes) {
    // alpha = 0: singular geometry is a numerical failure
    EXPECT_EQ(run_with(Command::Compute, {"quantity=tau", "theta=1", "alpha=0"}).code, 2);
    EXPECT_EQ(run_with(Command::Compute, {"quantity=regime", "rho=1", "delta=2"}).code, 0);
    // unnormalized trajectory start
    EXPECT_EQ(run_with(Command::Trajectory, {"theta=1", "t_end=1", "u1=2"}).code, 1);
}

// compute

TEST(Compute, SaddlePoint) {
    const auto r = run_with(Command::Compute, {"z=0", "omega=1", "alpha=pi"});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto rows = rows_of(r.out);
    ASSERT_EQ(rows.size(), 2u);
    EXPECT_EQ(rows[0], (std::vector<std::string>{"quantity", "value", "regime", "omega_arg", "diverged"}));
    EXPECT_NEAR(std::stod(rows[1][1]), pi, 1e-12);
    EXPECT_EQ(rows[1][4], "0");
}

TEST(Compute, DivergenceIsFlagged) {
    const auto r = run_with(Command::Compute, {"z=1", "omega=1"});
    EXPECT_EQ(r.code, 2);
    const auto rows = rows_of(r.out);
    ASSERT_EQ(rows.size(), 2u);
    EXPECT_EQ(rows[1][1], "inf");
    EXPECT_EQ(rows[1][4], "1");
}

TEST(Compute, OtherQuantities) {
    auto r = run_with(Command::Compute, {"quantity=tau", "theta=0.5pi+2j", "alpha=pi"});
    ASSERT_EQ(r.code, 0);
    EXPECT_NEAR(std::stod(rows_of(r.out)[1][1]), 2.0 * std::atan(1.0 / std::sinh(2.0)), 1e-14);
    r = run_with(Command::Compute, {"quantity=length", "theta=0.5pi"});
    EXPECT_NEAR(std::stod(rows_of(r.out)[1][1]), pi, 1e-14);
    r = run_with(Command::Compute, {"quantity=speed", "theta=0.5pi+2j"});
    EXPECT_NEAR(std::stod(rows_of(r.out)[1][1]), std::cosh(2.0), 1e-13);
    r = run_with(Command::Compute, {"quantity=regime", "rho=2", "delta=1"});
    EXPECT_EQ(rows_of(r.out)[1][2], "Coherent");
}

TEST(Compute, WritesOutputFile) {
    const auto path = std::filesystem::temp_directory_path() / "nhbrach_compute_test.csv";
    RunConfig cfg;
    apply_setting(cfg, "z=0");
    cfg.output_path = path.string();
    std::ostringstream o, e;
    ASSERT_EQ(run(cfg, o, e), 0);
    EXPECT_EQ(first_line(slurp(path)), "quantity,value,regime,omega_arg,diverged");
    std::filesystem::remove(path);
}

// sweep

TEST(Sweep, DeterministicAndJobIndependent) {
    const auto a = run_with(Command::Sweep, {"param1=re_theta", "param2=im_theta", "param1_grid=0.2,2.9,6",
                                             "param2_grid=-2,2,5"},
                            1);
    const auto b = run_with(Command::Sweep, {"param1=re_theta", "param2=im_theta", "param1_grid=0.2,2.9,6",
                                             "param2_grid=-2,2,5"},
                            1);
    const auto c = run_with(Command::Sweep, {"param1=re_theta", "param2=im_theta", "param1_grid=0.2,2.9,6",
                                             "param2_grid=-2,2,5"},
                            4);
    ASSERT_EQ(a.code, 0) << a.err;
    EXPECT_EQ(a.out, b.out);
    EXPECT_EQ(a.out, c.out);
    const auto rows = rows_of(a.out);
    ASSERT_EQ(rows.size(), 31u);
    EXPECT_EQ(rows[0], (std::vector<std::string>{"param1", "param2", "tau_closed", "tau_numeric", "residual", "regime",
                                                 "diverged"}));
    for (std::size_t i = 1; i < rows.size(); ++i) EXPECT_LT(std::stod(rows[i][4]), 1e-6) << i;
}

TEST(Sweep, DivergentCellsKeepGoing) {
    const auto r =
        run_with(Command::Sweep, {"param1=re_z", "param2=im_z", "param1_grid=-2,2,5", "param2_grid=-1,1,3"}, 2);
    ASSERT_EQ(r.code, 0) << r.err;
    const auto rows = rows_of(r.out);
    ASSERT_EQ(rows.size(), 16u);
    int diverged = 0;
    for (std::size_t i = 1; i < rows.size(); ++i) {
        const bool pole = std::stod(rows[i][1]) == 0.0 && std::abs(std::stod(rows[i][0])) == 1.0;
        if (rows[i][6] == "1") {
            ++diverged;
            EXPECT_TRUE(pole);
            EXPECT_EQ(rows[i][2], "inf");
            EXPECT_EQ(rows[i][3], "inf");
        } else {
            EXPECT_FALSE(pole);
        }
    }
    EXPECT_EQ(diverged, 2);
}

TEST(Sweep, RabiBranches) {
    auto r = run_with(Command::Sweep, {"param1=omega0", "param2=delta", "param1_grid=0.5,2,4",
                                       "param2_grid=0.5,2,4", "branch=coherent"});
    ASSERT_EQ(r.code, 0) << r.err;
    for (const auto& row : rows_of(r.out)) {
        if (row[0] != "param1") {
            EXPECT_LT(std::stod(row[4]), 1e-6);
        }
    }
    r = run_with(Command::Sweep, {"param1=omega0", "param2=delta", "param1_grid=0.5,2,4", "param2_grid=0.5,2,4",
                                  "branch=incoherent"});
    ASSERT_EQ(r.code, 0) << r.err;
    for (const auto& row : rows_of(r.out)) {
        if (row[0] == "param1") continue;
        if (std::stod(row[0]) < std::stod(row[1])) {
            EXPECT_LT(std::stod(row[4]), 1e-6);
        } else {
            EXPECT_EQ(row[2], "nan");
        }
    }
}

TEST(Sweep, OracleCanBeSwitchedOff) {
    const auto r = run_with(Command::Sweep, {"param1=re_theta", "param2=im_theta", "param1_grid=0.2,2.9,3",
                                             "param2_grid=-2,2,3", "oracle=0"});
    ASSERT_EQ(r.code, 0);
    for (const auto& row : rows_of(r.out)) {
        if (row[0] != "param1") {
            EXPECT_EQ(row[3], "nan");
        }
    }
}

// verify, figures, trajectory

TEST(Verify, DefaultSuitePasses) {
    const auto r = run_with(Command::Verify, {}, 4);
    ASSERT_EQ(r.code, 0) << r.err;
    const auto rows = rows_of(r.out);
    ASSERT_EQ(rows.size(), 51u);
    for (std::size_t i = 1; i < rows.size(); ++i) EXPECT_LT(std::stod(rows[i][8]), 1e-6);
}

TEST(Verify, ResidualLimitExceeded) {
    const auto r = run_with(Command::Verify, {"residual_tol=1e-30"});
    EXPECT_EQ(r.code, 3);
    EXPECT_NE(r.err.find("exceeds"), std::string::npos);
}

TEST(Figures, AllPass) {
    auto r = run_with(Command::Fig1, {});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_EQ(first_line(r.out), "omega_re,omega_im,z_re,z_im,tau_p,diverged");
    r = run_with(Command::Fig2, {});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_EQ(first_line(r.out), "delta,tau_coherent,tau_incoherent,bound_lower,bound_2_over_delta");
    r = run_with(Command::Fig3, {});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_EQ(first_line(r.out), "re_theta,im_theta,v_over_vg");
    EXPECT_EQ(rows_of(r.out).size(), 1u + 101u * 101u);
}

TEST(Figures, Fig1SingularCells) {
    const auto cells = fig1_data(fig1_panels(41));
    std::size_t div = 0;
    for (const auto& c : cells) div += c.r.diverged ? 1 : 0;
    EXPECT_EQ(div, 4u);
    EXPECT_TRUE(check_fig1(cells).ok());
}

TEST(Figures, CheckersCatchCorruption) {
    auto rows = fig2_data(fig2_grid(200));
    ASSERT_TRUE(check_fig2(rows).ok());
    rows.back().tau_coherent *= 1.5;
    EXPECT_FALSE(check_fig2(rows).ok());

    const auto [re, im] = fig3_grids(41);
    auto cells = fig3_data(re, im);
    ASSERT_TRUE(check_fig3(cells).ok());
    for (auto& c : cells) c.v_over_vg *= 0.5;
    EXPECT_FALSE(check_fig3(cells).ok());
}

TEST(Trajectory, HeaderAndSpinFlip) {
    const auto r = run_with(Command::Trajectory, {"theta=0.5pi+1j", "phi=0.5pi", "omega=1", "steps=10",
                                                  "t_end=1.410053687110476"});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto rows = rows_of(r.out);
    ASSERT_EQ(rows.size(), 12u);
    EXPECT_EQ(rows[0].size(), 15u);
    EXPECT_EQ(rows[0][0], "t");
    EXPECT_EQ(rows[0][14], "n3_im");
    // n3 starts at 1 and ends at -1 for the optimal PT flip
    EXPECT_NEAR(std::stod(rows[1][13]), 1.0, 1e-12);
    EXPECT_NEAR(std::stod(rows.back()[13]), -1.0, 1e-8);
}

// the binary

TEST(Binary, EndToEnd) {
    const std::string exe = NHBRACH_CLI_PATH;
    const std::string dir = NHBRACH_SAMPLES_DIR;
    const auto tmp = std::filesystem::temp_directory_path() / "nhbrach_cli_test";
    std::filesystem::create_directories(tmp);
    const std::string quiet = " > /dev/null 2>&1";

    const auto out = (tmp / "saddle.csv").string();
    EXPECT_EQ(shell(exe + " compute --config " + dir + "/saddle.conf --out " + out + quiet), 0);
    const auto rows = rows_of(slurp(out));
    ASSERT_EQ(rows.size(), 2u);
    EXPECT_NEAR(std::stod(rows[1][1]), pi, 1e-12);

    EXPECT_EQ(shell(exe + " compute --set z=1" + quiet), 2);
    EXPECT_EQ(shell(exe + " compute --set z=1+" + quiet), 1);
    EXPECT_EQ(shell(exe + " plot" + quiet), 1);
    EXPECT_EQ(shell(exe + " compute --tol -1 --set z=0" + quiet), 1);
    EXPECT_EQ(shell(exe + " compute --config /nonexistent.conf" + quiet), 1);
    EXPECT_EQ(shell(exe + " verify --set residual_tol=1e-30" + quiet), 3);

    const auto s1 = (tmp / "s1.csv").string(), s4 = (tmp / "s4.csv").string();
    EXPECT_EQ(shell(exe + " sweep --config " + dir + "/pt_sweep.conf --jobs 1 --out " + s1 + quiet), 0);
    EXPECT_EQ(shell(exe + " sweep --config " + dir + "/pt_sweep.conf --jobs 4 --out " + s4 + quiet), 0);
    EXPECT_EQ(slurp(s1), slurp(s4));
    EXPECT_FALSE(slurp(s1).empty());

    EXPECT_EQ(shell(exe + " sweep --config " + dir + "/rabi_sweep.conf --out " + (tmp / "r.csv").string() + quiet), 0);
    EXPECT_EQ(shell(exe + " trajectory --config " + dir + "/pt_trajectory.conf --out " + (tmp / "t.csv").string() +
                    quiet),
              0);
    std::filesystem::remove_all(tmp);
}
