#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <sstream>
#include <vector>

#include "evolab/core/angles.hpp"
#include "evolab/core/rng.hpp"
#include "evolab/cpg/morphology.hpp"
#include "evolab/cpg/network.hpp"
#include "evolab/ctrl/reservoir.hpp"
#include "evolab/sim/drive.hpp"
#include "evolab/sim/field.hpp"
#include "evolab/sim/trial.hpp"
#include "evolab/sim/world.hpp"

using namespace evolab;

namespace {

sim::WorldConfig small_world() {
    sim::WorldConfig cfg;
    cfg.arena_side = 10.0;
    cfg.swarm_size = 4;
    cfg.spawn_radius = 0.0;
    cfg.spawn_box_side = 3.0;
    cfg.duration = 2.0;
    return cfg;
}

// hand-placed robots, zero wheels
sim::SwarmWorld place(const sim::WorldConfig& cfg,
                      std::vector<sim::RobotPose> poses) {
    return sim::SwarmWorld(cfg, std::move(poses));
}

}  // namespace

TEST_CASE("center field peaks at the middle and fades to the walls") {
    const sim::ScalarField f = sim::make_field(sim::FieldKind::center, 10.0);
    CHECK(f.value(5.0, 5.0) == 255.0);
    CHECK(f.value(0.0, 5.0) == 0.0);
    CHECK_THAT(f.value(2.5, 5.0), Catch::Matchers::WithinAbs(127.5, 1e-12));
    CHECK_THAT(f.value(5.0, 7.5), Catch::Matchers::WithinAbs(127.5, 1e-12));
}

TEST_CASE("bimodal field has a bright and a dim peak") {
    const sim::ScalarField f = sim::make_field(sim::FieldKind::bimodal, 10.0);
    CHECK(f.value(7.5, 5.0) == 255.0);
    CHECK(f.value(2.5, 5.0) == 200.0);
    CHECK(f.value(5.0, 0.0) == 0.0);  // outside both cones
}

TEST_CASE("linear field ramps along x") {
    const sim::ScalarField f = sim::make_field(sim::FieldKind::linear, 10.0);
    CHECK(f.value(0.0, 3.0) == 0.0);
    CHECK_THAT(f.value(5.0, 9.0), Catch::Matchers::WithinAbs(127.5, 1e-12));
    CHECK(f.value(10.0, 0.0) == 255.0);
}

TEST_CASE("banana field has its single maximum off-center on the ridge") {
    const sim::ScalarField f = sim::make_field(sim::FieldKind::banana, 12.0);
    const double s = 2.0;  // side / 6
    CHECK_THAT(f.value(6.0 + s, 6.0 + s), Catch::Matchers::WithinAbs(255.0, 1e-12));
    CHECK(f.value(6.0, 6.0) < 255.0);
    CHECK(f.value(6.0 + s, 6.0 + s) > f.value(6.0 - s, 6.0 + s));
}

TEST_CASE("every field kind stays inside [0, 255] across the arena") {
    core::RandomStream rng(41, "field");
    for (sim::FieldKind kind : {sim::FieldKind::center, sim::FieldKind::bimodal,
                                sim::FieldKind::linear, sim::FieldKind::banana}) {
        const sim::ScalarField f = sim::make_field(kind, 7.0);
        for (int i = 0; i < 2500; ++i) {
            const double v = f.value(rng.uniform(0.0, 7.0), rng.uniform(0.0, 7.0));
            REQUIRE(v >= 0.0);
            REQUIRE(v <= 255.0);
        }
    }
    CHECK(sim::field_kind_from_string("banana") == sim::FieldKind::banana);
    CHECK_THROWS(sim::field_kind_from_string("spiral"));
    CHECK_THROWS(sim::make_field(sim::FieldKind::center, 0.0));
}

TEST_CASE("field grid csv samples cell centers") {
    const sim::ScalarField f = sim::make_field(sim::FieldKind::linear, 3.0);
    std::ostringstream os;
    sim::write_field_grid_csv(os, f, 3);
    std::istringstream is(os.str());
    std::string line;
    std::getline(is, line);
    CHECK(line == "x,y,value");
    int rows = 0;
    std::string first;
    while (std::getline(is, line))
        if (!line.empty()) {
            if (rows == 0) first = line;
            ++rows;
        }
    CHECK(rows == 9);
    CHECK(first.substr(0, 8) == "0.5,0.5,");
}

TEST_CASE("group ratios split the swarm by integer division") {
    CHECK(sim::group_zero_count(14, {1, 1}) == 7);
    CHECK(sim::group_zero_count(20, {3, 1}) == 15);
    CHECK(sim::group_zero_count(14, {1, 0}) == 14);
    CHECK(sim::group_zero_count(14, {0, 1}) == 0);
    CHECK(sim::group_zero_count(5, {1, 1}) == 2);
    CHECK_THROWS(sim::group_zero_count(5, {0, 0}));
}

TEST_CASE("world config validation rejects bad grids and spawn boxes") {
    sim::WorldConfig cfg = small_world();
    cfg.validate();
    sim::WorldConfig bad = cfg;
    bad.spawn_radius = 4.0;  // box would poke out of the arena
    CHECK_THROWS(bad.validate());
    bad = cfg;
    bad.control_period = 0.07;  // not a multiple of dt
    CHECK_THROWS(bad.validate());
    bad = cfg;
    bad.duration = 2.05;  // not a multiple of control_period
    CHECK_THROWS(bad.validate());
    bad = cfg;
    bad.group_ratio = {0, 0};
    CHECK_THROWS(bad.validate());
}

TEST_CASE("spawned swarms sit in the box, apart, with assigned groups") {
    sim::WorldConfig cfg = small_world();
    cfg.swarm_size = 14;
    cfg.spawn_radius = 2.0;
    core::RandomStream rng(42, "spawn");
    const std::vector<sim::RobotPose> poses = sim::spawn_swarm(cfg, rng);
    REQUIRE(poses.size() == 14);
    double cx = 0.0, cy = 0.0;
    for (const auto& p : poses) {
        cx += p.x;
        cy += p.y;
    }
    cx /= 14.0;
    cy /= 14.0;
    const double dist_from_center = std::hypot(cx - 5.0, cy - 5.0);
    CHECK(dist_from_center < 2.0 + 1.5);
    for (std::size_t i = 0; i < poses.size(); ++i) {
        REQUIRE(poses[i].heading > -core::kPi);
        REQUIRE(poses[i].heading <= core::kPi);
        REQUIRE(poses[i].group == (i < 7 ? 0 : 1));
        for (std::size_t j = i + 1; j < poses.size(); ++j)
            REQUIRE(std::hypot(poses[i].x - poses[j].x, poses[i].y - poses[j].y) >=
                    2.0 * cfg.robot_radius);
    }

    core::RandomStream again(42, "spawn");
    const std::vector<sim::RobotPose> rerun = sim::spawn_swarm(cfg, again);
    for (std::size_t i = 0; i < poses.size(); ++i) {
        REQUIRE(rerun[i].x == poses[i].x);
        REQUIRE(rerun[i].y == poses[i].y);
        REQUIRE(rerun[i].heading == poses[i].heading);
    }
}

TEST_CASE("equal wheels drive a straight segment") {
    sim::RobotPose p{1.0, 2.0, 0.5, 0};
    sim::detail::advance_arc(p, 0.1, 0.1, 0.094, 2.0);
    CHECK_THAT(p.x, Catch::Matchers::WithinAbs(1.0 + 0.2 * std::cos(0.5), 1e-15));
    CHECK_THAT(p.y, Catch::Matchers::WithinAbs(2.0 + 0.2 * std::sin(0.5), 1e-15));
    CHECK(p.heading == 0.5);
}

TEST_CASE("opposite wheels spin in place") {
    sim::RobotPose p{1.0, 2.0, 0.0, 0};
    const double omega = 0.2 / 0.094;
    sim::detail::advance_arc(p, -0.1, 0.1, 0.094, 0.5);
    CHECK(p.x == 1.0);
    CHECK(p.y == 2.0);
    CHECK_THAT(p.heading, Catch::Matchers::WithinAbs(core::wrap_pi(0.5 * omega), 1e-12));
}

TEST_CASE("one driven wheel traces a quarter circle") {
    sim::RobotPose p{0.0, 0.0, 0.0, 0};
    const double axle = 0.094;
    const double omega = 0.1 / axle;
    const double dt = (core::kPi / 2.0) / omega;
    sim::detail::advance_arc(p, 0.0, 0.1, axle, dt);
    const double radius = 0.05 / omega;
    CHECK_THAT(p.x, Catch::Matchers::WithinAbs(radius, 1e-12));
    CHECK_THAT(p.y, Catch::Matchers::WithinAbs(radius, 1e-12));
    CHECK_THAT(p.heading, Catch::Matchers::WithinAbs(core::kPi / 2.0, 1e-12));
}

TEST_CASE("walls clamp and robots slide along them") {
    sim::WorldConfig cfg = small_world();
    cfg.swarm_size = 1;
    sim::SwarmWorld world =
        place(cfg, {{9.8, 5.0, 0.0, 0}});  // heading straight at the right wall
    world.set_wheels(0, 0.14, 0.14);
    for (int s = 0; s < 100; ++s) sim::step_world(world, cfg.dt);
    CHECK(world.robots[0].x == 10.0 - cfg.robot_radius);
    CHECK(world.robots[0].y == 5.0);

    world.robots[0].heading = core::kPi / 4.0;  // slide up the wall
    for (int s = 0; s < 10; ++s) sim::step_world(world, cfg.dt);
    CHECK(world.robots[0].x == 10.0 - cfg.robot_radius);
    CHECK(world.robots[0].y > 5.0);
}

TEST_CASE("overlaps separate and count once per control step") {
    sim::WorldConfig cfg = small_world();
    cfg.swarm_size = 2;
    sim::SwarmWorld world = place(cfg, {{5.0, 5.0, 0.0, 0}, {5.1, 5.0, 0.0, 0}});
    world.begin_control_step();
    sim::step_world(world, cfg.dt);
    CHECK(world.collision_count == 1);
    const double gap = std::hypot(world.robots[1].x - world.robots[0].x,
                                  world.robots[1].y - world.robots[0].y);
    CHECK(gap >= 2.0 * cfg.robot_radius - 1e-12);

    // same control step: pushing them back together must not recount
    world.robots[1].x = world.robots[0].x + 0.1;
    world.robots[1].y = world.robots[0].y;
    sim::step_world(world, cfg.dt);
    CHECK(world.collision_count == 1);

    // new control step: the pair may count again
    world.begin_control_step();
    world.robots[1].x = world.robots[0].x + 0.1;
    world.robots[1].y = world.robots[0].y;
    sim::step_world(world, cfg.dt);
    CHECK(world.collision_count == 2);
}

TEST_CASE("an isolated robot senses empty quadrants and its light") {
    sim::WorldConfig cfg = small_world();
    cfg.swarm_size = 1;
    const sim::ScalarField f = sim::make_field(sim::FieldKind::center, 10.0);
    sim::SwarmWorld world = place(cfg, {{5.0, 5.0, 0.3, 0}});
    const std::array<double, 9> s = sim::sense(world, f, 0);
    // empty quadrants read the placeholder distance 2 -> normalized 1
    for (int q = 0; q < 4; ++q) {
        CHECK(s[2 * q] == 1.0);
        CHECK(s[2 * q + 1] == 0.0);
    }
    CHECK(s[8] == 1.0);  // light 255 at the peak
    CHECK(sim::perceived_neighbors(world, 0).empty());
    CHECK_THROWS(sim::sense(world, f, 1));
}

TEST_CASE("four neighbors at the sensor range fill all quadrants") {
    sim::WorldConfig cfg = small_world();
    cfg.swarm_size = 5;
    const sim::ScalarField f = sim::make_field(sim::FieldKind::center, 10.0);
    // front, back, left, right at exactly sensor_range = 2, headings equal
    sim::SwarmWorld world = place(cfg, {{5.0, 5.0, 0.0, 0},
                                        {7.0, 5.0, 0.0, 0},
                                        {3.0, 5.0, 0.0, 0},
                                        {5.0, 7.0, 0.0, 0},
                                        {5.0, 3.0, 0.0, 0}});
    const std::array<double, 9> s = sim::sense(world, f, 0);
    const std::array<double, 9> expected = {1.0, 0.0, 1.0, 0.0, 1.0,
                                            0.0, 1.0, 0.0, 1.0};
    for (int i = 0; i < 9; ++i)
        CHECK_THAT(s[i], Catch::Matchers::WithinAbs(expected[i], 1e-12));
    // hits ordered front, back, left, right
    CHECK(sim::perceived_neighbors(world, 0) == std::vector<int>{1, 2, 3, 4});
}

TEST_CASE("the distance entry drops to 0.5 for a neighbor at 1.5 m") {
    sim::WorldConfig cfg = small_world();
    cfg.swarm_size = 2;
    const sim::ScalarField f = sim::make_field(sim::FieldKind::center, 10.0);
    sim::SwarmWorld world = place(cfg, {{5.0, 5.0, 0.0, 0}, {6.5, 5.0, 0.0, 0}});
    const std::array<double, 9> s = sim::sense(world, f, 0);
    CHECK_THAT(s[0], Catch::Matchers::WithinAbs(0.5, 1e-12));
    CHECK(s[1] == 0.0);
    CHECK(s[2] == 1.0);  // other quadrants still empty
}

TEST_CASE("the heading entry is the neighbor's relative heading, not bearing") {
    sim::WorldConfig cfg = small_world();
    cfg.swarm_size = 2;
    const sim::ScalarField f = sim::make_field(sim::FieldKind::center, 10.0);
    // dead ahead (bearing 0) but facing left (heading pi/2)
    sim::SwarmWorld world =
        place(cfg, {{5.0, 5.0, 0.0, 0}, {6.0, 5.0, core::kPi / 2.0, 0}});
    const std::array<double, 9> s = sim::sense(world, f, 0);
    CHECK_THAT(s[0], Catch::Matchers::WithinAbs(0.0, 1e-12));  // d = 1
    CHECK_THAT(s[1], Catch::Matchers::WithinAbs(0.5, 1e-12));  // (pi/2) / pi
}

TEST_CASE("out-of-range robots are invisible and ties go to the lower index") {
    sim::WorldConfig cfg = small_world();
    cfg.swarm_size = 3;
    const sim::ScalarField f = sim::make_field(sim::FieldKind::center, 10.0);
    sim::SwarmWorld far = place(cfg, {{5.0, 5.0, 0.0, 0},
                                      {7.001, 5.0, 0.0, 0},
                                      {5.0, 8.0, 0.0, 0}});
    CHECK(sim::perceived_neighbors(far, 0).empty());

    // both in the front quadrant at exactly 1.25 (binary-exact 3-4-5 triple)
    sim::SwarmWorld tie = place(cfg, {{5.0, 5.0, 0.0, 0},
                                      {6.25, 5.0, 0.7, 0},
                                      {6.0, 5.75, 0.9, 0}});
    CHECK(sim::perceived_neighbors(tie, 0) == std::vector<int>{1});
    const std::array<double, 9> s = sim::sense(tie, f, 0);
    CHECK_THAT(s[1], Catch::Matchers::WithinAbs(0.7 / core::kPi, 1e-12));
}

TEST_CASE("a zeroed symmetric controller leaves the swarm parked") {
    sim::WorldConfig cfg = small_world();
    sim::ControllerBundle bundle;
    bundle.reservoirs.resize(1);
    core::RandomStream rng(43, "trial");
    bundle.reservoirs[0] = ctrl::reservoir_init(rng, 2.0);  // w_out stays zero
    const sim::ScalarField f = sim::make_field(sim::FieldKind::center, 10.0);
    const sim::TrialLog log = sim::run_swarm_trial(bundle, cfg, f, 9001);
    REQUIRE(log.records.size() == 20);
    CHECK(log.records.front().t == 0.0);
    CHECK_THAT(log.records.back().t, Catch::Matchers::WithinAbs(1.9, 1e-12));
    for (std::size_t i = 0; i < 4; ++i) {
        CHECK(log.records.back().robots[i].x == log.records.front().robots[i].x);
        CHECK(log.records.back().robots[i].y == log.records.front().robots[i].y);
    }
    CHECK(log.collisions == 0);
    CHECK(log.fitness >= 0.0);
    CHECK(log.fitness <= 1.0);
    CHECK(log.mean_order >= 0.0);
    CHECK(log.mean_order <= 1.0);
}

TEST_CASE("a zeroed forward-only controller drives straight lines") {
    sim::WorldConfig cfg = small_world();
    sim::ControllerBundle bundle;
    bundle.reservoirs.resize(1);
    core::RandomStream rng(44, "fwd_trial");
    bundle.reservoirs[0] = ctrl::reservoir_init(rng, 2.0);
    bundle.mode = sim::VelocityMode::forward_only;
    const sim::ScalarField f = sim::make_field(sim::FieldKind::center, 10.0);
    const sim::TrialLog log = sim::run_swarm_trial(bundle, cfg, f, 9002);
    // v = 1/2 everywhere: 0.07 m/s along each initial heading for 1.9 s
    const auto& first = log.records.front().robots;
    const auto& last = log.records.back().robots;
    for (std::size_t i = 0; i < 4; ++i) {
        const double moved = std::hypot(last[i].x - first[i].x, last[i].y - first[i].y);
        REQUIRE_THAT(moved, Catch::Matchers::WithinAbs(0.07 * 1.9, 1e-9));
        REQUIRE(last[i].heading == first[i].heading);
    }
}

TEST_CASE("trial logs are byte-identical for a fixed seed") {
    sim::WorldConfig cfg = small_world();
    cfg.group_ratio = {1, 1};
    core::RandomStream rng(45, "det_trial");
    std::vector<ctrl::ReservoirNet> reservoirs{ctrl::reservoir_init(rng, 2.0),
                                               ctrl::reservoir_init(rng, 2.0)};
    const Eigen::VectorXd genotype = rng.uniform_vector(36, -1.0, 1.0);
    const sim::ControllerBundle bundle = sim::make_bundle(
        genotype, reservoirs, sim::VelocityMode::symmetric, ctrl::RegulatoryPolicy{});
    const sim::ScalarField f = sim::make_field(sim::FieldKind::bimodal, 10.0);

    const sim::TrialLog a = sim::run_swarm_trial(bundle, cfg, f, 77);
    const sim::TrialLog b = sim::run_swarm_trial(bundle, cfg, f, 77);
    std::ostringstream sa, sb;
    sim::write_trial_csv(sa, a);
    sim::write_trial_csv(sb, b);
    CHECK(sa.str() == sb.str());

    const sim::TrialLog c = sim::run_swarm_trial(bundle, cfg, f, 78);
    std::ostringstream sc;
    sim::write_trial_csv(sc, c);
    CHECK(sa.str() != sc.str());
}

TEST_CASE("trials validate their bundle and time grids") {
    sim::WorldConfig cfg = small_world();
    const sim::ScalarField f = sim::make_field(sim::FieldKind::center, 10.0);

    sim::ControllerBundle solo;
    solo.reservoirs.resize(1);
    solo.policy = ctrl::RegulatoryPolicy{};  // switching needs two groups
    CHECK_THROWS(sim::run_swarm_trial(solo, cfg, f, 1));

    sim::ControllerBundle pair;
    pair.reservoirs.resize(2);
    pair.policy = ctrl::RegulatoryPolicy{};
    pair.policy->update_period = 0.25;  // not a multiple of control_period
    CHECK_THROWS(sim::run_swarm_trial(pair, cfg, f, 1));

    const sim::ScalarField wrong = sim::make_field(sim::FieldKind::center, 8.0);
    pair.policy->update_period = 0.5;
    CHECK_THROWS(sim::run_swarm_trial(pair, cfg, wrong, 1));

    CHECK_THROWS(sim::make_bundle(Eigen::VectorXd::Zero(17), {ctrl::ReservoirNet{}},
                                  sim::VelocityMode::symmetric, std::nullopt));
}

TEST_CASE("regulatory switching regroups robots over a trial") {
    sim::WorldConfig cfg = small_world();
    cfg.swarm_size = 8;
    cfg.duration = 30.0;
    cfg.group_ratio = {1, 1};
    core::RandomStream rng(46, "reg_trial");
    std::vector<ctrl::ReservoirNet> reservoirs{ctrl::reservoir_init(rng, 2.0),
                                               ctrl::reservoir_init(rng, 2.0)};
    const sim::ControllerBundle bundle =
        sim::make_bundle(rng.uniform_vector(36, -1.0, 1.0), reservoirs,
                         sim::VelocityMode::symmetric, ctrl::RegulatoryPolicy{});
    const sim::ScalarField f = sim::make_field(sim::FieldKind::center, 10.0);
    const sim::TrialLog log = sim::run_swarm_trial(bundle, cfg, f, 5);
    bool saw_zero = false, saw_one = false;
    for (const auto& r : log.records.back().robots) {
        saw_zero = saw_zero || r.group == 0;
        saw_one = saw_one || r.group == 1;
    }
    CHECK(saw_zero);  // near the bright center, group 0 dominates
}

TEST_CASE("oscillator-driven body logs poses per period plus the endpoint") {
    core::RandomStream rng(47, "drive");
    cpg::CpgNetwork net = cpg::build_cpg_network(cpg::spider_morphology(), rng);
    net.set_initial_state(rng.uniform_vector(net.state_size(), -1.0, 1.0));
    sim::DriveConfig cfg;
    const sim::CpgDriveTrial trial = sim::cpg_drive_trial(net, cfg, 2.0);
    REQUIRE(trial.poses.size() == 21);
    REQUIRE(trial.cpg_states.size() == 20);
    CHECK(trial.poses.front().t == 0.0);
    CHECK(trial.poses.front().x == 0.0);
    CHECK(trial.poses.front().y == 0.0);
    CHECK(trial.poses.front().heading == 0.0);
    CHECK_THAT(trial.poses.back().t, Catch::Matchers::WithinAbs(2.0, 1e-12));
    CHECK((trial.cpg_states.front() - net.state()).cwiseAbs().maxCoeff() == 0.0);

    const sim::CpgDriveTrial again = sim::cpg_drive_trial(net, cfg, 2.0);
    for (std::size_t i = 0; i < trial.poses.size(); ++i) {
        REQUIRE(again.poses[i].x == trial.poses[i].x);
        REQUIRE(again.poses[i].y == trial.poses[i].y);
        REQUIRE(again.poses[i].heading == trial.poses[i].heading);
    }
}

TEST_CASE("a frozen oscillator drives the body straight at tanh speed") {
    cpg::CpgNetwork net(2, {{0, 1}});
    net.set_weights(Eigen::VectorXd::Zero(3));  // state never changes
    const double a = 0.70710678118654752;
    net.set_uniform_state(a);
    sim::DriveConfig cfg;
    const sim::CpgDriveTrial trial = sim::cpg_drive_trial(net, cfg, 10.0);
    const double expected_x = cfg.wheel_speed_max * std::tanh(a) * 10.0;
    CHECK_THAT(trial.poses.back().x, Catch::Matchers::WithinAbs(expected_x, 1e-9));
    CHECK_THAT(trial.poses.back().y, Catch::Matchers::WithinAbs(0.0, 1e-12));
    CHECK(trial.poses.back().heading == 0.0);
}

TEST_CASE("opposed frozen outputs spin the body in place") {
    cpg::CpgNetwork net(2, {{0, 1}});
    net.set_weights(Eigen::VectorXd::Zero(3));
    Eigen::VectorXd s0(4);
    s0 << -0.5, 0.5, 0.0, 0.0;  // left wheel back, right wheel forward
    net.set_initial_state(s0);
    sim::DriveConfig cfg;
    const sim::CpgDriveTrial trial = sim::cpg_drive_trial(net, cfg, 1.0);
    const double omega =
        2.0 * cfg.wheel_speed_max * std::tanh(0.5) / cfg.axle_width;
    CHECK_THAT(trial.poses.back().x, Catch::Matchers::WithinAbs(0.0, 1e-12));
    CHECK_THAT(trial.poses.back().y, Catch::Matchers::WithinAbs(0.0, 1e-12));
    CHECK_THAT(trial.poses.back().heading,
               Catch::Matchers::WithinAbs(core::wrap_pi(omega), 1e-9));

    cpg::CpgNetwork one(1, {});
    CHECK_THROWS(sim::cpg_drive_trial(one, cfg, 1.0));
    CHECK_THROWS(sim::cpg_drive_trial(net, cfg, 0.05));
}
