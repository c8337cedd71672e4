#include <doctest.h>

#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "qtd/dilation.hpp"
#include "qtd/experiment.hpp"
#include "qtd/format.hpp"
#include "qtd/units.hpp"

// End-to-end checks of the installed binary: every displayed value must be a
// byte-exact rendering of the corresponding library result.

using namespace qtd;
namespace fs = std::filesystem;
namespace nb = std::numbers;

namespace {

struct RunResult {
    int exit_code;
    std::string out;
};

RunResult run_cli(const std::string& args, bool merge_stderr = false) {
    const std::string cmd =
        std::string(QTD_CLI_PATH) + " " + args + (merge_stderr ? " 2>&1" : " 2>/dev/null");
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    std::string out;
    char buf[4096];
    size_t got;
    while ((got = fread(buf, 1, sizeof buf, pipe)) > 0) out.append(buf, got);
    const int status = pclose(pipe);
    const int code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return {code, out};
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    REQUIRE(in.good());
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::vector<std::string> lines_of(const std::string& text) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : text) {
        if (c == '\n') {
            out.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    if (!cur.empty()) out.push_back(cur);
    return out;
}

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            out.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    out.push_back(cur);
    return out;
}

fs::path fresh_dir(const std::string& name) {
    const auto dir = fs::temp_directory_path() / "qtd-cli-tests" / name;
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

std::string dilation_args(double theta, double phi, double pa, double pap, double pb,
                          double delta, double tau) {
    std::ostringstream s;
    s << "dilation --theta " << fmt::g17(theta) << " --phi " << fmt::g17(phi) << " --p-a "
      << fmt::g17(pa) << " --p-a-prime " << fmt::g17(pap) << " --p-b " << fmt::g17(pb)
      << " --delta " << fmt::g17(delta) << " --tau-b " << fmt::g17(tau);
    return s.str();
}

}  // namespace

TEST_CASE("dilation output is a byte-exact rendering of library results") {
    const double theta = nb::pi / 4.0, phi = 0.0;
    const double pa = 0.04, pap = 0.06, pb = 0.04, delta = 0.01, tau = 1.0;
    const auto r = dilation_result(
        Scenario(SuperpositionSpec(theta, phi, WavePacket(pa, delta), WavePacket(pap, delta)),
                 pb, tau));
    const std::string base = dilation_args(theta, phi, pa, pap, pb, delta, tau);

    SUBCASE("csv") {
        const auto res = run_cli(base + " --format csv");
        CHECK(res.exit_code == 0);
        const std::string expect =
            "k_classical,k_quantum,gamma_eff_inv,mean_tau_a\n" +
            fmt::csv_row({fmt::g17(r.k_classical), fmt::g17(r.k_quantum),
                          fmt::g17(r.gamma_eff_inv), fmt::g17(r.mean_tau_a)}) +
            "\n";
        CHECK(res.out == expect);
    }

    SUBCASE("json-lines") {
        const auto res = run_cli(base + " --format json-lines");
        CHECK(res.exit_code == 0);
        fmt::JsonLine j;
        j.field_number("k_classical", fmt::g17(r.k_classical));
        j.field_number("k_quantum", fmt::g17(r.k_quantum));
        j.field_number("gamma_eff_inv", fmt::g17(r.gamma_eff_inv));
        j.field_number("mean_tau_a", fmt::g17(r.mean_tau_a));
        CHECK(res.out == j.str() + "\n");
    }

    SUBCASE("human") {
        const auto res = run_cli(base);
        CHECK(res.exit_code == 0);
        CHECK(res.out.find("k_quantum") != std::string::npos);
        CHECK(res.out.find(" = ") != std::string::npos);
        CHECK(res.out.find(fmt::g6(r.k_quantum)) != std::string::npos);
    }

    SUBCASE("output file equals stdout") {
        const auto dir = fresh_dir("dilation-out");
        const auto path = dir / "result.csv";
        const auto res =
            run_cli(base + " --format csv --output " + path.string());
        CHECK(res.exit_code == 0);
        CHECK(res.out.empty());
        const auto direct = run_cli(base + " --format csv");
        CHECK(slurp(path) == direct.out);
    }
}

TEST_CASE("usage errors exit with code 2") {
    CHECK(run_cli("").exit_code == 2);
    CHECK(run_cli("frobnicate").exit_code == 2);
    CHECK(run_cli("dilation --theta 0.5").exit_code == 2);  // missing required flags
    CHECK(run_cli(dilation_args(0.5, 0, 0.01, 0.02, 0, 0.005, 1) + " --format yaml").exit_code ==
          2);
    CHECK(run_cli(dilation_args(0.5, 0, 0.01, 0.02, 0, 0.005, 1) + " --units parsec").exit_code ==
          2);
    // validation failures surface as exit 2 with a diagnostic
    const auto res = run_cli(dilation_args(0.5, 0, 0.01, 0.02, 0, -1.0, 1), true);
    CHECK(res.exit_code == 2);
    CHECK(res.out.find("error:") != std::string::npos);
}

TEST_CASE("si units agree with natural units") {
    const auto k = codata();
    const double mc = k.m_rb87 * k.c;
    std::ostringstream si;
    si << "dilation --units si --mass " << fmt::g17(k.m_rb87) << " --theta "
       << fmt::g17(nb::pi / 4.0) << " --phi 0 --p-a " << fmt::g17(0.04 * mc) << " --p-a-prime "
       << fmt::g17(0.06 * mc) << " --p-b " << fmt::g17(0.04 * mc) << " --delta "
       << fmt::g17(0.01 * mc) << " --tau-b 1 --format csv";
    const auto si_res = run_cli(si.str());
    const auto nat_res =
        run_cli(dilation_args(nb::pi / 4.0, 0.0, 0.04, 0.06, 0.04, 0.01, 1.0) + " --format csv");
    REQUIRE(si_res.exit_code == 0);
    REQUIRE(nat_res.exit_code == 0);

    const auto si_cells = split_csv(lines_of(si_res.out)[1]);
    const auto nat_cells = split_csv(lines_of(nat_res.out)[1]);
    REQUIRE(si_cells.size() == 4);
    for (int i = 0; i < 4; ++i)
        CHECK(std::stod(si_cells[i]) ==
              doctest::Approx(std::stod(nat_cells[i])).epsilon(1e-12));
}

TEST_CASE("estimate renders the builtin scenario byte for byte") {
    const auto sc = builtin_scenario("rb87-default");
    const auto r = estimate(sc);
    fmt::JsonLine j;
    j.field("scenario", std::string("rb87-default"));
    j.field_number("mass_kg", fmt::g17(sc.mass_kg));
    j.field_number("v1_m_per_s", fmt::g17(sc.v1_m_per_s));
    j.field_number("v2_m_per_s", fmt::g17(sc.v2_m_per_s));
    j.field_number("theta", fmt::g17(sc.theta));
    j.field_number("phi", fmt::g17(sc.phi));
    j.field_number("delta_v_m_per_s", fmt::g17(sc.delta_v_m_per_s));
    j.field_number("tau_b_s", fmt::g17(sc.tau_b_s));
    j.field_number("transition_freq_hz", fmt::g17(sc.transition_freq_hz));
    j.field_number("clock_resolution_s", fmt::g17(sc.clock_resolution_s));
    j.field_number("coherence_time_s", fmt::g17(sc.coherence_time_s));
    j.field_number("k_classical", fmt::g17(r.k_classical));
    j.field_number("k_quantum", fmt::g17(r.k_quantum));
    j.field_number("time_shift_quantum_s", fmt::g17(r.time_shift_quantum_s));
    j.field_number("resonance_shift_hz", fmt::g17(r.resonance_shift_hz));
    j.field("detectable", r.detectable);
    j.field_number("margin", fmt::g17(r.margin));

    const auto res = run_cli("estimate --scenario rb87-default --format json-lines");
    CHECK(res.exit_code == 0);
    CHECK(res.out == j.str() + "\n");
}

TEST_CASE("estimate input handling") {
    const auto unknown = run_cli("estimate --scenario cs133", true);
    CHECK(unknown.exit_code == 2);
    CHECK(unknown.out.find("error:") != std::string::npos);
    CHECK(unknown.out.find("rb87-default") != std::string::npos);

    const auto missing = run_cli("estimate --v1 10 --v2 70", true);
    CHECK(missing.exit_code == 2);
    CHECK(missing.out.find("--delta-v") != std::string::npos);

    const auto custom =
        run_cli("estimate --v1 10 --v2 70 --delta-v 26.5 --tau-b 10 --format json-lines");
    CHECK(custom.exit_code == 0);
    CHECK(custom.out.find("\"scenario\":\"custom\"") != std::string::npos);

    // field-by-field override on top of the named scenario
    const auto degenerate =
        run_cli("estimate --scenario rb87-default --v2 10 --format json-lines");
    CHECK(degenerate.exit_code == 0);
    CHECK(degenerate.out.find("\"k_quantum\":0,") != std::string::npos);
    CHECK(degenerate.out.find("\"detectable\":false") != std::string::npos);
}

TEST_CASE("sweep writes deterministic artifacts") {
    const std::string common =
        "sweep --beta 0.05 --diff-lo 0 --diff-hi 0.04 --diff-step 0.002 --delta 0.01";

    const auto dir1 = fresh_dir("sweep-a");
    const auto out1 = dir1 / "sweep.csv";
    const auto res1 = run_cli(common + " --output " + out1.string());
    CHECK(res1.exit_code == 0);
    REQUIRE(fs::exists(out1));
    REQUIRE(fs::exists(dir1 / "optimal.csv"));

    const auto rows = lines_of(slurp(out1));
    REQUIRE(rows.size() == 22);  // header + 21 rows
    CHECK(rows[0] == "beta,diff,k_classical,k_quantum,gamma_eff_inv,status");
    CHECK(split_csv(rows[1])[1] == "0");
    const auto opt_rows = lines_of(slurp(dir1 / "optimal.csv"));
    REQUIRE(opt_rows.size() == 2);
    CHECK(opt_rows[0] == "beta,diff_star,k_quantum_star");

    const auto dir2 = fresh_dir("sweep-b");
    const auto out2 = dir2 / "sweep.csv";
    CHECK(run_cli(common + " --output " + out2.string()).exit_code == 0);
    CHECK(slurp(out2) == slurp(out1));
    CHECK(slurp(dir2 / "optimal.csv") == slurp(dir1 / "optimal.csv"));

    SUBCASE("human summary reports the artifacts") {
        const auto dir = fresh_dir("sweep-human");
        const auto res =
            run_cli(common + " --format human --output " + (dir / "s.csv").string());
        CHECK(res.exit_code == 0);
        CHECK(res.out.find("wrote 21 rows") != std::string::npos);
        CHECK(res.out.find("diff_star") != std::string::npos);
        CHECK(fs::exists(dir / "s.csv"));
    }

    SUBCASE("json-lines variant carries the same schema") {
        const auto dir = fresh_dir("sweep-json");
        const auto out = dir / "rows.jsonl";
        const auto res = run_cli(common + " --format json-lines --output " + out.string() +
                                 " --optimal-output " + (dir / "opt.jsonl").string());
        CHECK(res.exit_code == 0);
        const auto jrows = lines_of(slurp(out));
        REQUIRE(jrows.size() == 21);
        CHECK(jrows[0].find("{\"beta\":" + fmt::g17(0.05) + ",\"diff\":0,") == 0);
        const auto jopt = lines_of(slurp(dir / "opt.jsonl"));
        REQUIRE(jopt.size() == 1);
        CHECK(jopt[0].find("\"diff_star\":") != std::string::npos);
    }

    SUBCASE("plot script requires csv format") {
        const auto dir = fresh_dir("sweep-plot");
        const auto bad = run_cli(common + " --format json-lines --output " +
                                     (dir / "r.jsonl").string() + " --plot-script " +
                                     (dir / "p.gp").string(),
                                 true);
        CHECK(bad.exit_code == 2);
        CHECK(!fs::exists(dir / "p.gp"));

        const auto good = run_cli(common + " --output " + (dir / "r.csv").string() +
                                  " --plot-script " + (dir / "p.gp").string());
        CHECK(good.exit_code == 0);
        CHECK(slurp(dir / "p.gp").find("plot") != std::string::npos);
    }

    SUBCASE("failed runs leave no partial artifacts") {
        const auto dir = fresh_dir("sweep-fail");
        const auto out = dir / "sweep.csv";
        const auto res = run_cli(common + " --output " + out.string() +
                                     " --optimal-output /nonexistent-qtd-dir/opt.csv",
                                 true);
        CHECK(res.exit_code == 1);
        CHECK(res.out.find("error:") != std::string::npos);
        CHECK(!fs::exists(out));
    }
}

TEST_CASE("oracle cross-check on a small model") {
    const std::string common =
        "oracle --dim-a 16 --dim-b 16 --grid-points 160 --tau-b-frac 0.25 --format csv";
    const auto res = run_cli(common);
    CHECK(res.exit_code == 0);
    const auto rows = lines_of(res.out);
    REQUIRE(rows.size() == 2);
    CHECK(rows[0] == "tau_b,oracle_mean,analytic_mean,abs_error,tolerance,pass");
    const auto cells = split_csv(rows[1]);
    REQUIRE(cells.size() == 6);
    CHECK(std::stod(cells[3]) <= std::stod(cells[4]));
    CHECK(cells[5] == "true");

    const auto again = run_cli(common);
    CHECK(again.out == res.out);

    SUBCASE("mixture baseline columns") {
        const auto mres = run_cli(common + " --mixture");
        CHECK(mres.exit_code == 0);
        const auto mrows = lines_of(mres.out);
        REQUIRE(mrows.size() == 2);
        CHECK(mrows[0] ==
              "tau_b,oracle_mean,analytic_mean,abs_error,tolerance,pass,"
              "mixture_mean,sup_minus_mix,neg_kq_tau_b");
    }
}

TEST_CASE("config files supply values and flags override them") {
    const auto dir = fresh_dir("config");
    const auto cfg = dir / "qtd.ini";
    {
        std::ofstream f(cfg);
        f << "[dilation]\n"
          << "theta=0.5\n"
          << "phi=0.25\n"
          << "p-a=0.01\n"
          << "p-a-prime=0.02\n"
          << "p-b=0.0\n"
          << "delta=0.005\n"
          << "tau-b=1.0\n"
          << "format=csv\n";
    }

    const auto from_cfg = run_cli("dilation --config " + cfg.string());
    CHECK(from_cfg.exit_code == 0);
    const auto direct =
        run_cli(dilation_args(0.5, 0.25, 0.01, 0.02, 0.0, 0.005, 1.0) + " --format csv");
    CHECK(from_cfg.out == direct.out);

    const auto overridden = run_cli("dilation --config " + cfg.string() + " --theta 0.6");
    const auto direct6 =
        run_cli(dilation_args(0.6, 0.25, 0.01, 0.02, 0.0, 0.005, 1.0) + " --format csv");
    CHECK(overridden.out == direct6.out);
}
