#include <gtest/gtest.h>
#include <sys/wait.h>

#include <cstdlib>
#include <fstream>
#include <string>

#include "temp_dir.hpp"

namespace {

// Runs the command-line tool and returns its exit status.
int run(const std::string& args, const std::filesystem::path& cwd = ".") {
  const std::string cmd = "cd '" + cwd.string() + "' && '" CAMVID_CLI_PATH "' " +
                          args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

TEST(Cli, SuccessAndHelp) {
  EXPECT_EQ(run("layout-check"), 0);
  EXPECT_EQ(run("layout-check --preset paper"), 0);
  EXPECT_EQ(run("--preset paper layout-check"), 0);
  EXPECT_EQ(run("--help"), 0);
}

TEST(Cli, UsageErrorsExitWithOne) {
  EXPECT_EQ(run(""), 1);
  EXPECT_EQ(run("frobnicate"), 1);
  EXPECT_EQ(run("layout-check --preset huge"), 1);
  EXPECT_EQ(run("layout-check --seed notanumber"), 1);
  EXPECT_EQ(run("layout-check --set model.heads=3"), 1);
  EXPECT_EQ(run("layout-check --set no.such.key=1"), 1);
  EXPECT_EQ(run("layout-check --set novalue"), 1);
  EXPECT_EQ(run("layout-check --config /no/such/file.conf"), 1);
  EXPECT_EQ(run("train"), 1);
  EXPECT_EQ(run("train everything"), 1);
  EXPECT_EQ(run("generate --image x.bin --direction sideways --out o"), 1);
  EXPECT_EQ(run("gen-data --split eval --clips 0"), 1);
}

TEST(Cli, MalformedConfigFileIsAUsageError) {
  camvid::testing::TempDir tmp;
  std::ofstream(tmp / "bad.conf") << "seed 4\n";
  EXPECT_EQ(run("layout-check --config '" + (tmp / "bad.conf").string() + "'"), 1);
}

TEST(Cli, MissingArtifactsAreRuntimeErrors) {
  camvid::testing::TempDir tmp;
  EXPECT_EQ(run("train model", tmp.path()), 2);
  EXPECT_EQ(run("train camcodec", tmp.path()), 2);
  EXPECT_EQ(run("eval", tmp.path()), 2);
  std::ofstream(tmp / "img.bin") << "junk";
  EXPECT_EQ(run("generate --image img.bin --direction left --out o", tmp.path()), 2);
}

}  // namespace
