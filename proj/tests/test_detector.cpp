#include <gtest/gtest.h>

#include <random>

#include "memguard/detector.hpp"
#include "memguard/json_io.hpp"
#include "support/reference_detector.hpp"

using namespace memguard;
using memguard::oracle::RefEvent;
using memguard::oracle::RefKind;
using memguard::oracle::RefMode;

namespace {

std::vector<ResourceReading> series(const std::vector<double>& mem, const std::string& id = "rpi",
                                    double interval = 3.0) {
  std::vector<ResourceReading> out;
  for (std::size_t i = 0; i < mem.size(); ++i) {
    ResourceReading r;
    r.device_id = id;
    r.timestamp_s = static_cast<double>(i) * interval;
    r.mem_frac = mem[i];
    r.cpu_frac = 0.01;
    out.push_back(r);
  }
  return out;
}

RefMode ref_mode(TriggerMode m) {
  switch (m) {
    case TriggerMode::Differential: return RefMode::Differential;
    case TriggerMode::Absolute: return RefMode::Absolute;
    case TriggerMode::Both: return RefMode::Both;
  }
  return RefMode::Both;
}

std::vector<RefEvent> as_ref(const std::vector<DetectionEvent>& events, double interval = 3.0) {
  std::vector<RefEvent> out;
  for (const auto& e : events) {
    RefKind k = RefKind::Started;
    if (e.kind == EventKind::MitigationApplied) k = RefKind::Mitigated;
    if (e.kind == EventKind::AttackStopped) k = RefKind::Stopped;
    out.push_back({k, static_cast<std::size_t>(std::llround(e.timestamp_s / interval))});
  }
  return out;
}

double unit(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

DetectorConfig absolute_config() {
  DetectorConfig c;
  c.trigger_mode = TriggerMode::Absolute;
  c.absolute_threshold = 0.37;
  c.count_threshold = 3;
  c.time_threshold = 4;
  return c;
}

}  // namespace

TEST(DerivedThresholds, ReadingThreshold) {
  EXPECT_EQ(derive_reading_threshold(raspberry_pi_profile()), 0.56);
  EXPECT_EQ(derive_reading_threshold(arduino_profile()), 0.37);
}

TEST(DerivedThresholds, AbsoluteThreshold) {
  EXPECT_EQ(default_absolute_threshold(raspberry_pi_profile()), 0.37);
  EXPECT_EQ(default_absolute_threshold(arduino_profile()), 0.18);
  auto p = raspberry_pi_profile();
  p.idle_mem = {0.10, 0.50};
  p.active_mem = {0.50, 0.98};
  p.attack_mem = {0.98, 1.0};
  EXPECT_EQ(default_absolute_threshold(p), 0.99);
}

TEST(DerivedThresholds, DefaultConfigUsesProfile) {
  const auto c = default_detector_config(arduino_profile());
  EXPECT_EQ(c.reading_threshold, 0.37);
  EXPECT_EQ(c.absolute_threshold, 0.18);
  EXPECT_EQ(c.count_threshold, 3);
  EXPECT_EQ(c.time_threshold, 4);
  EXPECT_EQ(c.mitigation_actions, full_mitigation());
}

TEST(DetectorStep, StartsOnFourthSuspiciousSample) {
  const auto events = detector_run(series({0.15, 0.18, 0.50, 0.55, 0.60, 0.62}), absolute_config());
  ASSERT_EQ(events.size(), 2u);
  EXPECT_EQ(events[0].kind, EventKind::AttackStarted);
  EXPECT_EQ(events[0].mem_frac, 0.62);
  EXPECT_EQ(events[0].timestamp_s, 15.0);
  EXPECT_EQ(events[1].kind, EventKind::MitigationApplied);
  EXPECT_EQ(events[1].actions, full_mitigation());
}

TEST(DetectorStep, StopsOnFifthQuietSample) {
  auto trace = series({0.15, 0.18, 0.50, 0.55, 0.60, 0.62, 0.18, 0.18, 0.18, 0.18, 0.18});
  const auto events = detector_run(trace, absolute_config());
  ASSERT_EQ(events.size(), 3u);
  EXPECT_EQ(events[2].kind, EventKind::AttackStopped);
  EXPECT_EQ(events[2].timestamp_s, trace.back().timestamp_s);

  trace.pop_back();
  EXPECT_EQ(detector_run(trace, absolute_config()).size(), 2u);
}

TEST(DetectorStep, FirstReadingOnlyPrimes) {
  DetectorState s;
  ResourceReading r = series({0.9}).front();
  auto res = detector_step(s, absolute_config(), r);
  EXPECT_TRUE(res.events.empty());
  EXPECT_EQ(res.state.prev_mem, 0.9);
  EXPECT_EQ(res.state.counter_c1, 0);
}

TEST(DetectorStep, ConstantStreamIsQuiet) {
  const auto config = absolute_config();
  DetectorState s;
  for (const auto& r : series(std::vector<double>(200, 0.15))) {
    auto res = detector_step(s, config, r);
    EXPECT_TRUE(res.events.empty());
    s = res.state;
  }
  DetectorState initial;
  initial.prev_mem = s.prev_mem;
  initial.prev_timestamp_s = s.prev_timestamp_s;
  EXPECT_EQ(s, initial);
}

TEST(DetectorStep, Errors) {
  const auto config = absolute_config();
  auto trace = series({0.2, 0.3});
  auto s = detector_step({}, config, trace[0]).state;
  trace[1].timestamp_s = trace[0].timestamp_s;
  try {
    detector_step(s, config, trace[1]);
    FAIL() << "expected an error";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::Ordering);
  }
  trace[1].timestamp_s = 10.0;
  trace[1].mem_frac = std::nan("");
  try {
    detector_step(s, config, trace[1]);
    FAIL() << "expected an error";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::InvalidMeasurement);
  }
  trace[1].mem_frac = 1.2;
  EXPECT_THROW(detector_step(s, config, trace[1]), Error);
}

TEST(DetectorStep, DeterministicForSameInputs) {
  const auto config = absolute_config();
  DetectorState s;
  s.prev_mem = 0.4;
  s.prev_timestamp_s = 3.0;
  s.counter_c1 = 3;
  const auto r = series({0.5, 0.5, 0.5}).back();
  const auto a = detector_step(s, config, r);
  const auto b = detector_step(s, config, r);
  EXPECT_EQ(a.state, b.state);
  EXPECT_EQ(a.events, b.events);
}

TEST(DetectorConfig, ValidationAndMitigationOrder) {
  DetectorConfig c;
  EXPECT_NO_THROW(c.validate());
  c.count_threshold = 0;
  EXPECT_THROW(c.validate(), Error);
  c = {};
  c.absolute_threshold = 1.5;
  EXPECT_THROW(c.validate(), Error);
  c = {};
  c.mitigation_actions = {MitigationAction::Disconnect, MitigationAction::Blacklist};
  try {
    c.validate();
    FAIL() << "expected an error";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::ProtocolViolation);
  }
  EXPECT_NO_THROW(validate_mitigation_order({}));
  EXPECT_NO_THROW(validate_mitigation_order({MitigationAction::StopReadWrite}));
  EXPECT_THROW(validate_mitigation_order({MitigationAction::Blacklist, MitigationAction::Blacklist}),
               Error);
}

TEST(DetectorConfig, JsonRoundTripRejectsUnknownKeys) {
  DetectorConfig c = default_detector_config(arduino_profile());
  c.trigger_mode = TriggerMode::Both;
  c.mitigation_actions = {MitigationAction::Blacklist};
  const json j = c;
  EXPECT_EQ(j.get<DetectorConfig>(), c);
  json bad = j;
  bad["sensitivity"] = 2;
  EXPECT_THROW(bad.get<DetectorConfig>(), Error);
}

TEST(DetectorRun, EmptyStream) { EXPECT_TRUE(detector_run({}, DetectorConfig{}).empty()); }

TEST(DetectorRun, InterleavedDevicesAreIsolated) {
  std::mt19937_64 rng(99);
  std::vector<double> a, b;
  for (int i = 0; i < 150; ++i) {
    a.push_back(unit(rng));
    b.push_back(unit(rng));
  }
  const auto config = absolute_config();
  const auto alone_a = detector_run(series(a, "a"), config);
  const auto alone_b = detector_run(series(b, "b"), config);

  std::vector<ResourceReading> mixed;
  const auto sa = series(a, "a");
  const auto sb = series(b, "b");
  for (std::size_t i = 0; i < a.size(); ++i) {
    mixed.push_back(sa[i]);
    mixed.push_back(sb[i]);
  }
  std::vector<DetectionEvent> got_a, got_b;
  for (auto& e : detector_run(mixed, config)) (e.device_id == "a" ? got_a : got_b).push_back(e);
  EXPECT_EQ(got_a, alone_a);
  EXPECT_EQ(got_b, alone_b);
  EXPECT_FALSE(alone_a.empty());
}

TEST(DetectorProperty, MatchesReferenceOnRandomTraces) {
  std::mt19937_64 rng(20240601);
  const TriggerMode modes[] = {TriggerMode::Differential, TriggerMode::Absolute, TriggerMode::Both};
  int mismatches = 0;
  std::size_t total_events = 0;
  for (int trace = 0; trace < 1000; ++trace) {
    DetectorConfig c;
    c.trigger_mode = modes[trace % 3];
    c.reading_threshold = 0.05 + 0.9 * unit(rng);
    c.absolute_threshold = 0.05 + 0.9 * unit(rng);
    c.count_threshold = 1 + static_cast<int>(rng() % 5);
    c.time_threshold = 1 + static_cast<int>(rng() % 6);
    const std::size_t len = rng() % 401;
    std::vector<double> mem;
    // Mix of uniform noise and sticky runs so both start and stop paths occur.
    double level = unit(rng);
    for (std::size_t i = 0; i < len; ++i) {
      if (rng() % 4 == 0) level = unit(rng);
      mem.push_back(rng() % 2 ? level : unit(rng));
    }
    const auto got = as_ref(detector_run(series(mem), c));
    const auto want = oracle::reference_detect(mem, ref_mode(c.trigger_mode), c.reading_threshold,
                                                c.absolute_threshold, c.count_threshold,
                                                c.time_threshold);
    total_events += want.size();
    if (got != want) ++mismatches;
  }
  EXPECT_EQ(mismatches, 0);
  EXPECT_GT(total_events, 100u);
}

TEST(DetectorProperty, EventsAlternate) {
  std::mt19937_64 rng(5);
  for (int trace = 0; trace < 300; ++trace) {
    std::vector<double> mem;
    double level = unit(rng);
    for (int i = 0; i < 300; ++i) {
      if (rng() % 8 == 0) level = unit(rng);
      mem.push_back(level);
    }
    const auto events = detector_run(series(mem), absolute_config());
    const EventKind cycle[] = {EventKind::AttackStarted, EventKind::MitigationApplied,
                               EventKind::AttackStopped};
    for (std::size_t i = 0; i < events.size(); ++i) {
      ASSERT_EQ(events[i].kind, cycle[i % 3]) << "trace " << trace << " event " << i;
    }
    if (events.size() % 3 == 1) FAIL() << "AttackStarted without MitigationApplied";
  }
}

TEST(DetectorProperty, StartAndStopLatency) {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 200; ++trial) {
    DetectorConfig c = absolute_config();
    c.count_threshold = 1 + static_cast<int>(rng() % 6);
    c.time_threshold = 1 + static_cast<int>(rng() % 6);
    const std::size_t quiet_prefix = 1 + rng() % 10;
    const std::size_t loud = static_cast<std::size_t>(c.count_threshold) + 1 + rng() % 10;
    const std::size_t quiet_suffix = static_cast<std::size_t>(c.time_threshold) + 1 + rng() % 5;
    std::vector<double> mem;
    for (std::size_t i = 0; i < quiet_prefix; ++i) mem.push_back(0.1 + 0.25 * unit(rng));
    for (std::size_t i = 0; i < loud; ++i) mem.push_back(0.4 + 0.5 * unit(rng));
    for (std::size_t i = 0; i < quiet_suffix; ++i) mem.push_back(0.1 + 0.25 * unit(rng));

    const auto events = as_ref(detector_run(series(mem), c));
    ASSERT_EQ(events.size(), 3u);
    const std::size_t first_loud = quiet_prefix;
    const std::size_t last_loud = quiet_prefix + loud - 1;
    EXPECT_EQ(events[0].index - first_loud, static_cast<std::size_t>(c.count_threshold));
    EXPECT_EQ(events[2].index - last_loud, static_cast<std::size_t>(c.time_threshold) + 1);
  }
}

TEST(DetectorProperty, QuiescentInsideLegitimateBands) {
  std::mt19937_64 rng(3);
  for (const auto& profile : {raspberry_pi_profile(), arduino_profile()}) {
    const auto config = default_detector_config(profile);
    for (int trace = 0; trace < 250; ++trace) {
      std::vector<double> mem;
      for (int i = 0; i < 200; ++i) {
        const Band& b = rng() % 2 ? profile.idle_mem : profile.active_mem;
        mem.push_back(b.min + (b.max - b.min) * unit(rng));
      }
      for (auto mode : {TriggerMode::Absolute, TriggerMode::Both, TriggerMode::Differential}) {
        auto c = config;
        c.trigger_mode = mode;
        EXPECT_TRUE(detector_run(series(mem), c).empty());
      }
    }
  }
}

TEST(DetectorProperty, ScaleCoherence) {
  std::mt19937_64 rng(8);
  const TriggerMode modes[] = {TriggerMode::Differential, TriggerMode::Absolute, TriggerMode::Both};
  for (int trace = 0; trace < 300; ++trace) {
    DetectorConfig c;
    c.trigger_mode = modes[trace % 3];
    c.reading_threshold = 0.1 + 0.8 * unit(rng);
    c.absolute_threshold = 0.1 + 0.8 * unit(rng);
    std::vector<double> mem;
    double level = unit(rng);
    for (int i = 0; i < 200; ++i) {
      if (rng() % 3 == 0) level = unit(rng);
      mem.push_back(level);
    }
    const auto base = as_ref(detector_run(series(mem), c));
    for (double k : {0.5, 0.25, 0.125}) {
      auto scaled_cfg = c;
      scaled_cfg.reading_threshold *= k;
      scaled_cfg.absolute_threshold *= k;
      std::vector<double> scaled;
      for (double m : mem) scaled.push_back(m * k);
      EXPECT_EQ(as_ref(detector_run(series(scaled), scaled_cfg)), base);
    }
  }
}

TEST(DetectorProperty, PersistedStateResumes) {
  std::mt19937_64 rng(21);
  const auto config = absolute_config();
  for (int trace = 0; trace < 100; ++trace) {
    std::vector<double> mem;
    double level = unit(rng);
    for (int i = 0; i < 120; ++i) {
      if (rng() % 6 == 0) level = unit(rng);
      mem.push_back(level);
    }
    const auto readings = series(mem);
    const auto whole = detector_run(readings, config);

    const std::size_t cut = rng() % readings.size();
    DetectorState s;
    std::vector<DetectionEvent> events;
    for (std::size_t i = 0; i < readings.size(); ++i) {
      if (i == cut) {
        const std::string text = json(s).dump();
        s = json::parse(text).get<DetectorState>();
      }
      auto res = detector_step(s, config, readings[i]);
      s = res.state;
      events.insert(events.end(), res.events.begin(), res.events.end());
    }
    EXPECT_EQ(events, whole);
  }
}
