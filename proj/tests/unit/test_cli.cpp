#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdio>
#include <fstream>

#include "test_support.hpp"

namespace {

struct Run {
  int status = -1;
  std::string output;
};

// Runs the CLI through the shell; stderr is folded into the output.
Run run(const std::string& args) {
  const std::string cmd = std::string(BWSLEX_CLI_PATH) + " " + args + " 2>&1";
  Run r;
  FILE* p = popen(cmd.c_str(), "r");
  if (!p) return r;
  char buf[4096];
  std::size_t n;
  while ((n = fread(buf, 1, sizeof buf, p)) > 0) r.output.append(buf, n);
  const int raw = pclose(p);
  r.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  return r;
}

std::string lexicon() { return testing_support::data_path("nonsense_words_emotion_intensities.csv").string(); }

}  // namespace

TEST(Cli, TopFear) {
  const auto r = run("top --lexicon " + lexicon() + " --emotion fear --k 1");
  EXPECT_EQ(r.status, 0) << r.output;
  EXPECT_EQ(r.output, "phrouth 1.0000\n");
}

TEST(Cli, DesignTooFewWords) {
  const auto dir = testing_support::scratch_dir("cli_small");
  std::ofstream(dir / "w.txt") << "bange\nlosh\nmaut\njuy\n";
  const auto r = run("design --words " + (dir / "w.txt").string() + " --seed 1 --out " + (dir / "d.json").string());
  EXPECT_NE(r.status, 0);
  EXPECT_NE(r.output.find("N must be >= 5"), std::string::npos) << r.output;
  std::filesystem::remove_all(dir);
}

TEST(Cli, MissingSeedRejected) {
  const auto r = run("design --words /dev/null");
  EXPECT_NE(r.status, 0);
}

TEST(Cli, UnknownEmotionRejected) {
  const auto r = run("top --lexicon " + lexicon() + " --emotion trust");
  EXPECT_NE(r.status, 0);
}

TEST(Cli, PipelineIsByteStable) {
  const auto dir = testing_support::scratch_dir("cli_pipe");
  std::ofstream(dir / "w.txt") << "# words\nbange\nlosh\nmaut\njuy\ndruss\nflike\nvomp\nphrouth\n";
  auto pipeline = [&](const std::string& tag) {
    const auto d = (dir / ("d" + tag + ".json")).string();
    const auto j = (dir / ("j" + tag + ".csv")).string();
    const auto s = (dir / ("s" + tag + ".csv")).string();
    const auto rel = (dir / ("r" + tag + ".csv")).string();
    EXPECT_EQ(run("design --words " + (dir / "w.txt").string() + " --seed 7 --out " + d).status, 0);
    EXPECT_EQ(run("simulate --design " + d + " --lexicon " + lexicon() + " --sigma 0.05 --seed 3 --out " + j).status, 0);
    EXPECT_EQ(run("aggregate --design " + d + " --judgments " + j + " --out " + s).status, 0);
    EXPECT_EQ(run("reliability --design " + d + " --judgments " + j + " --seed 2 --iterations 20 --out " + rel).status, 0);
    return testing_support::slurp(d) + testing_support::slurp(j) + testing_support::slurp(s) +
           testing_support::slurp(rel);
  };
  const std::string a = pipeline("a"), b = pipeline("b");
  EXPECT_FALSE(a.empty());
  EXPECT_EQ(a, b);
  EXPECT_NE(a.find("word,emotion,raw,scaled,n_judgments"), std::string::npos);
  EXPECT_NE(a.find("emotion,spearman,pearson,iterations,skipped"), std::string::npos);
  std::filesystem::remove_all(dir);
}

TEST(Cli, PhonemeReports) {
  const auto dir = testing_support::scratch_dir("cli_phon");
  const auto r = run("phonemes --lexicon " + lexicon() + " --phonemes p,sh --positions first --out-dir " +
                     dir.string());
  EXPECT_EQ(r.status, 0) << r.output;
  EXPECT_TRUE(std::filesystem::exists(dir / "welch_tests.csv"));
  EXPECT_TRUE(std::filesystem::exists(dir / "boxplots.csv"));
  std::filesystem::remove_all(dir);
}
