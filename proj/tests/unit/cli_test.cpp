// Copyright 2026 The seloc Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include <array>
#include <cstdio>
#include <fstream>
#include <sys/wait.h>

#include "cli_support.hpp"
#include "service/registry.hpp"
#include "test_util.hpp"

using namespace seloc;
using nlohmann::json;

namespace {

const std::filesystem::path kSource = SELOC_SOURCE_DIR;

struct Run {
  int exitCode = -1;
  std::string out;
  std::string err;
};

Run runCli(const std::string& args) {
  testutil::TempDir dir;
  auto errFile = dir.path() / "stderr";
  // Keep the default store out of the working directory.
  std::string cmd = "SELOC_DATA_DIR='" + (dir.path() / "store").string() + "' '" + SELOC_CLI + "' " + args +
                    " 2>'" + errFile.string() + "'";
  Run run;
  FILE* pipe = popen(cmd.c_str(), "r");
  std::array<char, 4096> buf{};
  while (auto n = fread(buf.data(), 1, buf.size(), pipe)) run.out.append(buf.data(), n);
  int status = pclose(pipe);
  run.exitCode = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  std::ifstream in(errFile);
  std::stringstream e;
  e << in.rdbuf();
  run.err = e.str();
  return run;
}

}  // namespace

TEST(FormatTable, Layout) {
  EXPECT_EQ(cli::formatTable({}, {"ID", "NAME"}), "ID  NAME\n");
  EXPECT_EQ(cli::formatTable({{"a", "first"}, {"bbb", "2"}}, {"ID", "NAME"}),
            "ID   NAME\n"
            "a    first\n"
            "bbb  2\n");
  EXPECT_EQ(cli::formatTable({{"x"}}, {"A", "B"}), "A  B\nx\n");
}

TEST(FormatTable, UnicodeWidth) {
  EXPECT_EQ(cli::displayWidth("abc"), 3u);
  EXPECT_EQ(cli::displayWidth("\xc3\xa9t\xc3\xa9"), 3u);     // été
  EXPECT_EQ(cli::displayWidth("e\xcc\x81"), 1u);              // e + combining acute
  EXPECT_EQ(cli::displayWidth("\xe6\x97\xa5\xe6\x9c\xac"), 4u);  // 日本
  EXPECT_EQ(cli::displayWidth("\xf0\x9f\x93\xb7"), 2u);        // camera emoji
  EXPECT_EQ(cli::displayWidth("\xff"), 1u);
  EXPECT_EQ(cli::formatTable({{"\xe6\x97\xa5", "x"}, {"ab", "y"}}, {"K", "V"}),
            "K   V\n\xe6\x97\xa5  x\nab  y\n");
}

TEST(Cli, JsonOutputMatchesTheLibrary) {
  service::Registry r(testutil::fixtureConfig());
  auto models = runCli("--fixtures --json list models");
  ASSERT_EQ(models.exitCode, 0) << models.err;
  EXPECT_EQ(models.out, r.handle({"GET", "/models", "", "", ""}).body + "\n");
  auto match = runCli("--fixtures --json match --device device_npu_01");
  EXPECT_EQ(match.out, r.handle({"GET", "/match/models?device=device_npu_01", "", "", ""}).body + "\n");
}

TEST(Cli, TablesAndQueries) {
  auto devices = runCli("--fixtures list devices");
  ASSERT_EQ(devices.exitCode, 0);
  EXPECT_EQ(std::count(devices.out.begin(), devices.out.end(), '\n'), 10);  // header + 9
  auto q = runCli("--fixtures --json query '" + (kSource / "data/queries/query2.rq").string() + "'");
  ASSERT_EQ(q.exitCode, 0) << q.err;
  EXPECT_EQ(json::parse(q.out)["results"]["bindings"].size(), 2u);
  auto search = runCli("--fixtures search conveyor workpieces camera classification -k 1");
  EXPECT_NE(search.out.find("workpieces_conveyorbelt_mobilnet"), std::string::npos);
}

TEST(Cli, ExitCodes) {
  auto domain = runCli("--fixtures --json match --device nope");
  EXPECT_EQ(domain.exitCode, 1);
  EXPECT_NE(domain.err.find("UnknownDeviceError"), std::string::npos);
  EXPECT_EQ(json::parse(domain.out)["code"], "UnknownDeviceError");
  EXPECT_EQ(runCli("--fixtures list bananas").exitCode, 2);
  EXPECT_EQ(runCli("").exitCode, 2);
  EXPECT_EQ(runCli("--fixtures match").exitCode, 2);
}

TEST(Cli, GenerateWritesGoldenBundle) {
  testutil::TempDir out;
  auto run = runCli("--fixtures generate --model 2c430e9b-04d1-4c87-afb5-655431201ee1 --device device_npu_01 "
                   "--target npu --config '" + (kSource / "data/configs/npu_workpieces.json").string() +
                   "' --generated-at 2024-01-01T00:00:00.000Z --out '" + out.path().string() + "'");
  ASSERT_EQ(run.exitCode, 0) << run.err;
  for (const auto& e : std::filesystem::directory_iterator(kSource / "tests/golden/npu")) {
    std::ifstream a(e.path()), b(out.path() / e.path().filename());
    std::stringstream sa, sb;
    sa << a.rdbuf();
    sb << b.rdbuf();
    EXPECT_EQ(sa.str(), sb.str()) << e.path().filename();
  }
  EXPECT_NE(run.out.find("2.92x"), std::string::npos);
}

TEST(Cli, IngestPersistsInDataDirectory) {
  testutil::TempDir dir;
  auto ttl = dir.path() / "extra.ttl";
  std::ofstream(ttl) << "<urn:a> <urn:b> \"c\" .\n";
  auto data = "--data-dir '" + (dir.path() / "store").string() + "' ";
  auto ingest = runCli(data + "--json ingest '" + ttl.string() + "' --graph extra");
  ASSERT_EQ(ingest.exitCode, 0) << ingest.err;
  EXPECT_EQ(json::parse(ingest.out)["tripleCount"], 1);
  EXPECT_TRUE(std::filesystem::exists(dir.path() / "store" / "manifest.json"));
  auto list = runCli(data + "--json list models");
  EXPECT_EQ(json::parse(list.out), json::array());
}
