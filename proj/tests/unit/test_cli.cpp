// Copyright 2026 The Noisy Gates Authors
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

#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;

namespace {

struct Outcome {
  int status = -1;
  std::string output;
};

Outcome run(const std::string& args, const std::string& env = "") {
  const std::string cmd = env + " " + std::string(NOISY_GATES_CLI) + " " + args + " 2>&1";
  Outcome o;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return o;
  char buf[4096];
  while (std::fgets(buf, sizeof buf, pipe)) o.output += buf;
  const int raw = pclose(pipe);
  o.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  return o;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("noisy_gates_cli_" + name);
  fs::remove_all(p);
  return p;
}

}  // namespace

TEST(Cli, UsageErrors) {
  EXPECT_EQ(run("").status, 1);
  EXPECT_EQ(run("simulate --shots 0").status, 1);
  EXPECT_EQ(run("simulate --estimator median").status, 1);
  EXPECT_EQ(run("simulate --reps banana").status, 1);
  EXPECT_EQ(run("--help").status, 0);
}

TEST(Cli, ValidationErrors) {
  const fs::path dir = scratch("bad_device");
  fs::create_directories(dir);
  std::ofstream(dir / "device.json")
      << R"({"qubits":[{"t1_s":1e-4,"t2_s":3e-4,"p_readout":0.01}],"gates":{"t_1q_s":3.5e-8,"t_2q_s":3e-7,"p_1q":0,"p_2q":0}})";
  const auto o = run("simulate --device " + (dir / "device.json").string());
  EXPECT_EQ(o.status, 2) << o.output;
  EXPECT_NE(o.output.find("T2 exceeds"), std::string::npos);
  std::ofstream(dir / "circuit.json") << R"({"n_qubits":1,"ops":[{"gate":"CR","q":[0]}]})";
  EXPECT_EQ(run("simulate --experiment custom_circuit --circuit " + (dir / "circuit.json").string()).status, 2);
  fs::remove_all(dir);
}

TEST(Cli, SimulateIsByteReproducible) {
  const fs::path a = scratch("rerun_a"), b = scratch("rerun_b");
  const std::string args = "simulate --experiment repeat_cnot --reps 6 --checkpoints 3 --shots 300 --out ";
  ASSERT_EQ(run(args + a.string() + " --parallel 1").status, 0);
  ASSERT_EQ(run(args + b.string() + " --parallel 2").status, 0);
  std::size_t compared = 0;
  for (const auto& entry : fs::recursive_directory_iterator(a)) {
    if (!entry.is_regular_file()) continue;
    const fs::path other = b / fs::relative(entry.path(), a);
    ASSERT_TRUE(fs::exists(other)) << other;
    EXPECT_EQ(slurp(entry.path()), slurp(other)) << entry.path();
    ++compared;
  }
  EXPECT_EQ(compared, 6u);
  fs::remove_all(a);
  fs::remove_all(b);
}

TEST(Cli, NoiselessRepetition) {
  const fs::path dir = scratch("noiseless");
  fs::create_directories(dir);
  std::ofstream(dir / "device.json")
      << R"({"qubits":[{"t1_s":1e300,"t2_s":1e300,"p_readout":0}],"gates":{"t_1q_s":3.5e-8,"t_2q_s":3e-7,"p_1q":0,"p_2q":0}})";
  const auto o = run("simulate --experiment repeat_x --reps 2 --checkpoints 2 --shots 10 --backends lindblad "
                     "--device " + (dir / "device.json").string() + " --out " + (dir / "out").string());
  ASSERT_EQ(o.status, 0) << o.output;
  fs::path csv;
  for (const auto& e : fs::recursive_directory_iterator(dir / "out"))
    if (e.path().filename() == "lindblad.csv") csv = e.path();
  std::ifstream in(csv);
  std::string header, first, second;
  std::getline(in, header);
  std::getline(in, first);
  std::getline(in, second);
  EXPECT_EQ(header.rfind("gates,time_s,p_0", 0), 0u) << header;
  EXPECT_EQ(second.rfind("2,", 0), 0u);
  std::vector<std::string> fields;
  std::stringstream row(second);
  for (std::string f; std::getline(row, f, ',');) fields.push_back(f);
  ASSERT_EQ(fields.size(), 4u);
  const double p0 = std::stod(fields[2]);
  EXPECT_NEAR(p0, 1.0, 1e-9);
  fs::remove_all(dir);
}

TEST(Cli, ValidateFailsWithZeroTolerance) {
  const auto o = run("validate 1", "NOISY_GATES_TOLERANCE_SCALE=0");
  EXPECT_EQ(o.status, 3) << o.output;
  EXPECT_NE(o.output.find("FAIL"), std::string::npos) << o.output;
  const auto ok = run("validate 1");
  EXPECT_EQ(ok.status, 0) << ok.output;
  EXPECT_NE(ok.output.find("PASS"), std::string::npos);
}
