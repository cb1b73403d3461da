#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "tagforge/checkpoint.hpp"

using namespace tagforge;

namespace {

Checkpoint sample(std::uint64_t advance) {
  Checkpoint c{"k=2 r=3 0:00 1:1101", "12:3962:0", HaltDetector(parse_state_id("12:3962:0"))};
  c.detector.advance(advance);
  return c;
}

std::string bytes_of(const Checkpoint& c) {
  std::stringstream out;
  write_checkpoint(out, c);
  return out.str();
}

}  // namespace

TEST(Checkpoint, StreamRoundTrip) {
  for (std::uint64_t n : {0ull, 1ull, 12345ull, 250000ull}) {
    const auto c = sample(n);
    const auto b = bytes_of(c);
    EXPECT_EQ(b.substr(0, 8), "TAGCKPT1");
    std::stringstream in(b);
    const auto back = read_checkpoint(in);
    EXPECT_EQ(back.rule_literal, c.rule_literal);
    EXPECT_EQ(back.initial_id, c.initial_id);
    EXPECT_TRUE(back.detector == c.detector);
    EXPECT_EQ(bytes_of(back), b);
  }
}

TEST(Checkpoint, RejectsCorruption) {
  const auto b = bytes_of(sample(5000));
  std::mt19937_64 rng(1);
  for (int trial = 0; trial < 50; ++trial) {
    std::string bad = b;
    bad[rng() % bad.size()] ^= static_cast<char>(1 + rng() % 255);
    std::stringstream in(bad);
    EXPECT_THROW(read_checkpoint(in), FormatError);
  }
  std::stringstream truncated(b.substr(0, b.size() - 3));
  EXPECT_THROW(read_checkpoint(truncated), FormatError);
  std::stringstream trailing(b + "x");
  EXPECT_THROW(read_checkpoint(trailing), FormatError);
  std::string wrong_version = b;
  wrong_version[8] = 9;
  std::stringstream v(wrong_version);
  EXPECT_THROW(read_checkpoint(v), FormatError);
}

TEST(Checkpoint, ResumeMatchesUninterruptedRun) {
  Checkpoint whole = sample(0);
  while (whole.detector.advance(1u << 16) == DetectorStatus::running) {
  }
  const auto want = to_json_line("12:3962:0", whole.detector.finish());

  std::mt19937_64 rng(20240601);
  const auto dir = std::filesystem::temp_directory_path() / ("tagforge_ckpt_" + std::to_string(rng()));
  std::filesystem::create_directories(dir);
  for (int k = 0; k < 10; ++k) {
    const std::uint64_t kill = 1 + rng() % 260000;
    Checkpoint c = sample(kill);
    save_checkpoint(dir / "run.ckpt", c);
    Checkpoint resumed = load_checkpoint(dir / "run.ckpt");
    while (resumed.detector.advance(1u << 16) == DetectorStatus::running) {
    }
    EXPECT_EQ(to_json_line("12:3962:0", resumed.detector.finish()), want) << "kill at " << kill;
  }
  std::filesystem::remove_all(dir);
}

TEST(Checkpoint, MissingFile) {
  EXPECT_THROW(load_checkpoint("/nonexistent/dir/x.ckpt"), std::exception);
}
