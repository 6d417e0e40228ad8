#include "raildyn/config.hpp"

#include "raildyn/csv.hpp"
#include "raildyn/manifest.hpp"

#include <doctest.h>
#include <json.hpp>

#include <fstream>
#include <sstream>
#include <string>

using namespace raildyn;

namespace {

// doctest 2.4.11 has no substring matcher; check the message by hand.
template <typename Fn>
void check_config_error(Fn&& fn, const std::string& needle) {
    try {
        fn();
        FAIL_CHECK("expected ConfigError containing \"" << needle << "\"");
    } catch (const ConfigError& e) {
        CHECK_MESSAGE(std::string(e.what()).find(needle) != std::string::npos,
                      "message was: " << e.what());
    }
}

const char* kFullConfig = R"(# scenario with every key exercised
[track]
rho_r_kg_m3 = 7000
A_r_cm2 = 80        ; entered in cm^2
E_R_GPa = 210
i_r_cm4 = 3055
m_T_kg = 125
k_s_MN_m = 350
c_s_kNs_m = 48
k_b_MN_m = 250
c_b_kNs_m = 59
zeta1 = 0.015
zeta2 = 0.025
L_m = 0.45
sections = 6

[pulse]
kind = rectangular
p0_tonnes = 12.5
g_m_s2 = 9.80665
t_d_s = 0.008
omega_rad_s = 300

[solver]
method = state-space
dt_s = 2e-5
duration_s = 0.05
undamped = yes

[output]
dir = results/run1
threshold_percent = 2.0
)";

} // namespace

TEST_CASE("default scenario mirrors the reference data set") {
    const ScenarioConfig cfg;
    const TrackProperties ref = TrackProperties::reference();
    CHECK(cfg.track.rho_r == ref.rho_r);
    CHECK(cfg.track.E_r == ref.E_r);
    CHECK(cfg.track.k_b == ref.k_b);
    CHECK(cfg.track.L == ref.L);
    CHECK(cfg.sections == 4);
    CHECK(cfg.pulse_kind == PulseKind::half_sine);
    CHECK(cfg.p0_newtons() == doctest::Approx(98100.0));
    CHECK(cfg.resolved_dt() == doctest::Approx(1e-4));
    CHECK(cfg.resolved_duration() == doctest::Approx(0.1));
    CHECK(cfg.threshold_percent == 1.5);
    CHECK_NOTHROW(cfg.validate());
}

TEST_CASE("entry units convert to SI on parse") {
    const ScenarioConfig cfg = parse_config_text(kFullConfig);

    CHECK(cfg.track.rho_r == doctest::Approx(7000.0));
    CHECK(cfg.track.A_r == doctest::Approx(80e-4));
    CHECK(cfg.track.E_r == doctest::Approx(210e9));
    CHECK(cfg.track.I_r == doctest::Approx(3055e-8));
    CHECK(cfg.track.m_T == doctest::Approx(125.0));
    CHECK(cfg.track.k_s == doctest::Approx(350e6));
    CHECK(cfg.track.c_s == doctest::Approx(48e3));
    CHECK(cfg.track.k_b == doctest::Approx(250e6));
    CHECK(cfg.track.c_b == doctest::Approx(59e3));
    CHECK(cfg.track.zeta1 == doctest::Approx(0.015));
    CHECK(cfg.track.zeta2 == doctest::Approx(0.025));
    CHECK(cfg.track.L == doctest::Approx(0.45));
    CHECK(cfg.sections == 6);

    CHECK(cfg.pulse_kind == PulseKind::rectangular);
    CHECK(cfg.p0_newtons() == doctest::Approx(12.5 * 1000.0 * 9.80665));
    CHECK(cfg.t_d == doctest::Approx(0.008));
    CHECK(cfg.pulse().omega == doctest::Approx(300.0));

    CHECK(cfg.method == SolveMethod::state_space);
    CHECK(cfg.dt == doctest::Approx(2e-5));
    CHECK(cfg.duration == doctest::Approx(0.05));
    CHECK(cfg.undamped);
    CHECK(cfg.resolved_track().c_s == 0.0);
    CHECK(cfg.resolved_track().c_b == 0.0);

    CHECK(cfg.out_dir == "results/run1");
    CHECK(cfg.threshold_percent == doctest::Approx(2.0));
}

TEST_CASE("shared damping ratio key sets both anchors") {
    const ScenarioConfig cfg = parse_config_text("[track]\nzeta = 0.03\n");
    CHECK(cfg.track.zeta1 == doctest::Approx(0.03));
    CHECK(cfg.track.zeta2 == doctest::Approx(0.03));
}

TEST_CASE("load amplitude can be entered in newtons directly") {
    const ScenarioConfig cfg = parse_config_text("[pulse]\np0_n = 98100\ng_m_s2 = 1\n");
    CHECK(cfg.p0_entered_newtons);
    CHECK(cfg.p0_newtons() == doctest::Approx(98100.0));
}

TEST_CASE("aliases for pulse kinds and solver methods") {
    CHECK(parse_config_text("[pulse]\nkind = half-sine\n").pulse_kind ==
          PulseKind::half_sine);
    CHECK(parse_config_text("[pulse]\nkind = SINE\n").pulse_kind == PulseKind::half_sine);
    CHECK(parse_config_text("[pulse]\nkind = rect\n").pulse_kind ==
          PulseKind::rectangular);
    CHECK(parse_config_text("[solver]\nmethod = modal\n").method ==
          SolveMethod::modal_undamped);
    CHECK(parse_config_text("[solver]\nmethod = state\n").method ==
          SolveMethod::state_space);
    CHECK(parse_config_text("[solver]\nmethod = Newmark\n").method ==
          SolveMethod::newmark);
}

TEST_CASE("malformed input fails with the field path") {
    check_config_error([] { parse_config_text("[track]\nbogus = 1\n"); },
                       "unknown config key track.bogus");
    check_config_error([] { parse_config_text("[foo]\n"); }, "unknown config section");
    check_config_error([] { parse_config_text("l_m = 0.3\n"); }, "before any section");
    check_config_error([] { parse_config_text("[pulse]\nt_d_s = fast\n"); },
                       "expected a number");
    check_config_error([] { parse_config_text("[track]\njust a line\n"); },
                       "expected key = value");
    check_config_error([] { parse_config_text("[track\nl_m = 0.3\n"); },
                       "malformed section header");
    check_config_error(
        [] { parse_config_text("[pulse]\np0_tonnes = 10\np0_n = 98100\n"); },
        "mutually exclusive");
    check_config_error([] { parse_config_text("[solver]\nundamped = maybe\n"); },
                       "expected a boolean");
    check_config_error([] { parse_config_text("[pulse]\nkind = sawtooth\n"); },
                       "expected sine or rect");
    check_config_error([] { parse_config_text("[solver]\nmethod = euler\n"); },
                       "expected modal, state or newmark");
}

TEST_CASE("scenario validation rejects unusable values") {
    auto broken = [](auto&& mutate) {
        ScenarioConfig cfg;
        mutate(cfg);
        return cfg;
    };
    CHECK_THROWS_AS(broken([](ScenarioConfig& c) { c.sections = 0; }).validate(),
                    ConfigError);
    CHECK_THROWS_AS(broken([](ScenarioConfig& c) { c.t_d = 0.0; }).validate(),
                    ConfigError);
    CHECK_THROWS_AS(broken([](ScenarioConfig& c) { c.p0_tonnes = 0.0; }).validate(),
                    ConfigError);
    CHECK_THROWS_AS(broken([](ScenarioConfig& c) { c.g = 0.0; }).validate(), ConfigError);
    CHECK_THROWS_AS(broken([](ScenarioConfig& c) { c.dt = -1e-4; }).validate(),
                    ConfigError);
    CHECK_THROWS_AS(broken([](ScenarioConfig& c) { c.duration = -1.0; }).validate(),
                    ConfigError);
    CHECK_THROWS_AS(broken([](ScenarioConfig& c) { c.omega_override = -1.0; }).validate(),
                    ConfigError);
    CHECK_THROWS_AS(
        broken([](ScenarioConfig& c) { c.threshold_percent = -0.1; }).validate(),
        ConfigError);
    CHECK_THROWS_AS(broken([](ScenarioConfig& c) { c.track.L = 0.0; }).validate(),
                    ConfigError);
}

TEST_CASE("config files load from disk") {
    const std::string path = "test_config_roundtrip.ini";
    {
        std::ofstream out(path, std::ios::binary);
        out << kFullConfig;
    }
    const ScenarioConfig cfg = load_config(path);
    CHECK(cfg.sections == 6);
    CHECK(cfg.track.L == doctest::Approx(0.45));
    std::remove(path.c_str());

    check_config_error([] { load_config("no/such/file.ini"); }, "cannot open");
}

TEST_CASE("csv cells use fixed-width scientific notation") {
    CHECK(csv::cell(1.0) == "1.00000000e+00");
    CHECK(csv::cell(0.0) == "0.00000000e+00");
    CHECK(csv::cell(-2.5e-3) == "-2.50000000e-03");
    CHECK(csv::cell(98100.0) == "9.81000000e+04");
}

TEST_CASE("csv quoting follows RFC 4180") {
    CHECK(csv::quote("plain") == "plain");
    CHECK(csv::quote("a,b") == "\"a,b\"");
    CHECK(csv::quote("say \"hi\"") == "\"say \"\"hi\"\"\"");
    CHECK(csv::quote("two\nlines") == "\"two\nlines\"");

    std::ostringstream out;
    csv::write_row(out, {"a", "b,c", "d"});
    CHECK(out.str() == "a,\"b,c\",d\n");
}

TEST_CASE("manifest echoes entry units and is byte-stable") {
    const ScenarioConfig cfg = parse_config_text(kFullConfig);
    const std::string text = manifest_json(cfg);
    CHECK(text == manifest_json(cfg));
    CHECK(text.back() == '\n');

    const nlohmann::json j = nlohmann::json::parse(text);
    CHECK(j["track"]["A_r_cm2"].get<double>() == doctest::Approx(80.0));
    CHECK(j["track"]["E_r_GPa"].get<double>() == doctest::Approx(210.0));
    CHECK(j["track"]["I_r_cm4"].get<double>() == doctest::Approx(3055.0));
    CHECK(j["track"]["k_s_MN_m"].get<double>() == doctest::Approx(350.0));
    CHECK(j["track"]["c_b_kNs_m"].get<double>() == doctest::Approx(59.0));
    CHECK(j["track"]["sections"].get<int>() == 6);
    CHECK(j["pulse"]["kind"].get<std::string>() == "rect");
    CHECK(j["pulse"]["p0_N"].get<double>() == doctest::Approx(12.5 * 1000.0 * 9.80665));
    CHECK(j["pulse"]["p0_tonnes"].get<double>() == doctest::Approx(12.5));
    CHECK(j["pulse"]["omega_rad_s"].get<double>() == doctest::Approx(300.0));
    CHECK(j["solver"]["method"].get<std::string>() == "state");
    CHECK(j["solver"]["dt_s"].get<double>() == doctest::Approx(2e-5));
    CHECK(j["solver"]["undamped"].get<bool>());
    CHECK(j["output"]["dir"].get<std::string>() == "results/run1");

    // Amplitudes entered in newtons are echoed back the same way.
    const ScenarioConfig newtons = parse_config_text("[pulse]\np0_n = 98100\n");
    const nlohmann::json jn = nlohmann::json::parse(manifest_json(newtons));
    CHECK(jn["pulse"]["p0_N"].get<double>() == doctest::Approx(98100.0));
    CHECK(!jn["pulse"].contains("p0_tonnes"));
}
