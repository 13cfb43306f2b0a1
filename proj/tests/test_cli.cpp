// End-to-end checks of the command-line tool: every subcommand is exercised
// through a real subprocess and judged on exit code, stdout text, and the
// bytes it leaves on disk.

#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <gtest/gtest.h>

namespace {

namespace fs = std::filesystem;

struct CliResult {
  int exit_code = -1;
  std::string output;  // stdout and stderr interleaved
};

std::string shell_quote(const std::string& s) {
  std::string quoted = "'";
  for (const char c : s) {
    if (c == '\'') quoted += "'\\''";
    else quoted += c;
  }
  quoted += '\'';
  return quoted;
}

CliResult run_cli(const std::vector<std::string>& args) {
  std::string cmd = shell_quote(EXPERTSTREAM_CLI_PATH);
  for (const std::string& arg : args) cmd += ' ' + shell_quote(arg);
  cmd += " 2>&1";
  FILE* pipe = popen(cmd.c_str(), "r");
  if (pipe == nullptr) throw std::runtime_error("popen failed for: " + cmd);
  CliResult result;
  char buf[4096];
  std::size_t got = 0;
  while ((got = fread(buf, 1, sizeof buf, pipe)) > 0) result.output.append(buf, got);
  const int status = pclose(pipe);
  result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return result;
}

// Per-test scratch path under the system temp dir; wiped before use so reruns
// start clean. The returned leaf is intentionally not created: output
// directories must be created by the tool itself.
fs::path scratch_path(const std::string& name) {
  const fs::path root = fs::temp_directory_path() / "expertstream-cli-tests";
  fs::create_directories(root);
  const fs::path leaf = root / name;
  fs::remove_all(leaf);
  return leaf;
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  ASSERT_TRUE(out.is_open()) << "cannot write " << path;
  out << text;
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in.is_open()) {
    ADD_FAILURE() << "cannot open " << path;
    return {};
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> lines;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) lines.push_back(line);
  return lines;
}

std::vector<std::string> fields_of(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  for (const char c : line) {
    if (c == ',') {
      fields.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  fields.push_back(cur);
  return fields;
}

constexpr const char* kSummaryHeader =
    "run_id,algorithm,stream,n,T,M,R,seed,mistakes_alg,mistakes_best,best_index,"
    "avg_regret,peak_slots,budget_violated,eps_per_call,privacy_calls,"
    "composed_epsilon,composed_delta,status";

constexpr const char* kTraceHeader =
    "run_id,day,algorithm,prediction,outcome,cum_mistakes_alg,cum_mistakes_best,"
    "avg_regret,memory_slots";

TEST(CliSelftest, AllChecksPass) {
  const CliResult res = run_cli({"selftest"});
  EXPECT_EQ(res.exit_code, 0) << res.output;
  EXPECT_NE(res.output.find("selftest: all checks passed"), std::string::npos) << res.output;
  EXPECT_EQ(res.output.find("FAILED"), std::string::npos) << res.output;
}

TEST(CliSimulate, WritesTraceAndSummary) {
  const fs::path dir = scratch_path("simulate_basic");
  const CliResult res = run_cli({"simulate", "--set", "algorithm=wm", "--set", "stream=planted",
                                 "--set", "n=8", "--set", "t=32", "--set", "m=2", "--set", "r=0.5",
                                 "--seed", "3", "--out", dir.string()});
  ASSERT_EQ(res.exit_code, 0) << res.output;
  EXPECT_NE(res.output.find("wm_s3: mistakes="), std::string::npos) << res.output;
  EXPECT_NE(res.output.find(" status=ok"), std::string::npos) << res.output;

  const auto trace = lines_of(read_file(dir / "trace_wm_s3.csv"));
  ASSERT_EQ(trace.size(), 33u);  // header plus one row per day
  EXPECT_EQ(trace[0], kTraceHeader);
  EXPECT_EQ(trace[1].rfind("wm_s3,0,wm,", 0), 0u) << trace[1];

  const auto summary = lines_of(read_file(dir / "summary.csv"));
  ASSERT_EQ(summary.size(), 2u);
  EXPECT_EQ(summary[0], kSummaryHeader);
  const auto f = fields_of(summary[1]);
  ASSERT_EQ(f.size(), 19u) << summary[1];
  EXPECT_EQ(f[0], "wm_s3");
  EXPECT_EQ(f[1], "wm");
  EXPECT_EQ(f[2], "planted");
  EXPECT_EQ(f[3], "8");
  EXPECT_EQ(f[4], "32");
  EXPECT_EQ(f[5], "2");
  EXPECT_EQ(f[6], "0.5");
  EXPECT_EQ(f[7], "3");
  EXPECT_EQ(f[12], "8");  // weight table holds one slot per expert
  EXPECT_EQ(f[13], "0");
  // privacy columns stay empty for a non-private algorithm
  EXPECT_EQ(f[14], "");
  EXPECT_EQ(f[15], "");
  EXPECT_EQ(f[16], "");
  EXPECT_EQ(f[17], "");
  EXPECT_EQ(f[18], "ok");
}

TEST(CliSimulate, OneRowAndTracePerSeed) {
  const fs::path dir = scratch_path("simulate_seeds");
  const CliResult res = run_cli({"simulate", "--set", "algorithm=wm", "--set", "stream=planted",
                                 "--set", "n=4", "--set", "t=8", "--set", "m=2", "--set", "r=0.5",
                                 "--seeds", "0..2", "--out", dir.string()});
  ASSERT_EQ(res.exit_code, 0) << res.output;
  for (const char* name : {"trace_wm_s0.csv", "trace_wm_s1.csv", "trace_wm_s2.csv"})
    EXPECT_TRUE(fs::exists(dir / name)) << name;
  const auto summary = lines_of(read_file(dir / "summary.csv"));
  ASSERT_EQ(summary.size(), 4u);
  EXPECT_EQ(fields_of(summary[1])[7], "0");
  EXPECT_EQ(fields_of(summary[2])[7], "1");
  EXPECT_EQ(fields_of(summary[3])[7], "2");
}

TEST(CliSimulate, RefusesToClobberThenForcedRerunIsByteIdentical) {
  const fs::path dir = scratch_path("simulate_clobber");
  const std::vector<std::string> args = {"simulate", "--set", "algorithm=wm",
                                         "--set",    "stream=planted", "--set", "n=8",
                                         "--set",    "t=32", "--set", "m=2",
                                         "--set",    "r=0.5", "--seed", "3",
                                         "--out",    dir.string()};
  ASSERT_EQ(run_cli(args).exit_code, 0);
  const std::string summary_first = read_file(dir / "summary.csv");
  const std::string trace_first = read_file(dir / "trace_wm_s3.csv");

  const CliResult blocked = run_cli(args);
  EXPECT_EQ(blocked.exit_code, 1);
  EXPECT_NE(blocked.output.find("already exists; pass --force"), std::string::npos)
      << blocked.output;

  std::vector<std::string> forced = args;
  forced.push_back("--force");
  ASSERT_EQ(run_cli(forced).exit_code, 0);
  EXPECT_EQ(read_file(dir / "summary.csv"), summary_first);
  EXPECT_EQ(read_file(dir / "trace_wm_s3.csv"), trace_first);
}

TEST(CliSimulate, MemoryBudgetViolationExitsTwo) {
  const fs::path dir = scratch_path("simulate_budget");
  const CliResult res = run_cli({"simulate", "--set", "algorithm=wm", "--set", "stream=planted",
                                 "--set", "n=8", "--set", "t=16", "--set", "m=2", "--set", "r=0.5",
                                 "--set", "memory_budget=1", "--seed", "0", "--out", dir.string()});
  EXPECT_EQ(res.exit_code, 2) << res.output;
  EXPECT_NE(res.output.find("status=memory_budget_violation"), std::string::npos) << res.output;
  const auto summary = lines_of(read_file(dir / "summary.csv"));
  ASSERT_EQ(summary.size(), 2u);
  const auto f = fields_of(summary[1]);
  ASSERT_EQ(f.size(), 19u);
  EXPECT_EQ(f[13], "1");
  EXPECT_EQ(f[18], "memory_budget_violation");
}

TEST(CliSimulate, PoolRunStaysInBoundAndDumpsRefills) {
  const fs::path dir = scratch_path("simulate_detpool");
  const CliResult res = run_cli({"simulate", "--set", "algorithm=detpool", "--set",
                                 "stream=planted", "--set", "n=8", "--set", "t=64", "--set", "m=1",
                                 "--set", "r=0.5", "--set", "dump_pools=1", "--seed", "5", "--out",
                                 dir.string()});
  ASSERT_EQ(res.exit_code, 0) << res.output;
  EXPECT_NE(res.output.find("detpool_s5: mistakes="), std::string::npos) << res.output;
  EXPECT_NE(res.output.find(" status=ok"), std::string::npos) << res.output;
  EXPECT_TRUE(fs::exists(dir / "trace_detpool_s5.csv"));
  const std::string refills = read_file(dir / "refills_detpool_s5.txt");
  EXPECT_FALSE(refills.empty());
}

TEST(CliSimulate, StoredMatrixStreamFollowsThePerfectExpert) {
  const fs::path dir = scratch_path("simulate_file");
  fs::create_directories(dir.parent_path());
  const fs::path matrix = scratch_path("simulate_file_matrix.txt");
  write_text(matrix, "2 4\n10 1\n10 1\n10 1\n10 1\n");

  const CliResult res =
      run_cli({"simulate", "--set", "stream=file", "--set", "matrix_file=" + matrix.string(),
               "--set", "algorithm=wm", "--set", "r=0.5", "--seed", "0", "--out", dir.string()});
  ASSERT_EQ(res.exit_code, 0) << res.output;
  const auto summary = lines_of(read_file(dir / "summary.csv"));
  ASSERT_EQ(summary.size(), 2u);
  const auto f = fields_of(summary[1]);
  ASSERT_EQ(f.size(), 19u);
  EXPECT_EQ(f[2], "file");
  EXPECT_EQ(f[3], "2");
  EXPECT_EQ(f[4], "4");
  EXPECT_EQ(f[8], "0");   // ties go to 1, so the all-ones expert is never contradicted
  EXPECT_EQ(f[9], "0");
  EXPECT_EQ(f[10], "0");
}

TEST(CliConfig, FileThenSetThenFlagPrecedence) {
  const fs::path dir = scratch_path("config_precedence");
  const fs::path cfg = scratch_path("config_precedence.cfg");
  write_text(cfg,
             "# smoke config\n"
             "algorithm = wm\n"
             "stream = planted\n"
             "n = 8\n"
             "t = 32\n"
             "m = 2\n"
             "r = 0.5\n"
             "seed = 4\n");
  const CliResult res = run_cli({"simulate", "--config", cfg.string(), "--set", "n=16", "--seed",
                                 "9", "--out", dir.string()});
  ASSERT_EQ(res.exit_code, 0) << res.output;
  const auto summary = lines_of(read_file(dir / "summary.csv"));
  ASSERT_EQ(summary.size(), 2u);
  const auto f = fields_of(summary[1]);
  EXPECT_EQ(f[0], "wm_s9");  // named flag beats the config file's seed
  EXPECT_EQ(f[3], "16");     // --set beats the config file's n
  EXPECT_EQ(f[7], "9");
}

TEST(CliConfig, UnknownKeyIsRejectedByName) {
  const CliResult res = run_cli({"simulate", "--set", "bogus=1", "--out",
                                 scratch_path("config_unknown").string()});
  EXPECT_EQ(res.exit_code, 1);
  EXPECT_NE(res.output.find("unknown key 'bogus'"), std::string::npos) << res.output;
}

TEST(CliConfig, MalformedSetIsRejected) {
  const CliResult res = run_cli({"simulate", "--set", "nonsense", "--out",
                                 scratch_path("config_malformed").string()});
  EXPECT_EQ(res.exit_code, 1);
  EXPECT_NE(res.output.find("--set expects key=value"), std::string::npos) << res.output;
}

TEST(CliConfig, ConfigFileLineWithoutEqualsIsRejected) {
  const fs::path cfg = scratch_path("config_badline.cfg");
  write_text(cfg, "algorithm = wm\nn 8\n");
  const CliResult res = run_cli({"simulate", "--config", cfg.string(), "--out",
                                 scratch_path("config_badline_out").string()});
  EXPECT_EQ(res.exit_code, 1);
  EXPECT_NE(res.output.find("line 2 is not key=value"), std::string::npos) << res.output;
}

TEST(CliConfig, ParameterScreenBlocksUnlessWarnFlagIsGiven) {
  const std::vector<std::string> base = {"simulate", "--set", "algorithm=discpred",
                                         "--set",    "stream=planted", "--set", "n=16",
                                         "--set",    "t=64", "--set", "m=8",
                                         "--set",    "r=0.1", "--seed", "0"};
  std::vector<std::string> blocked = base;
  blocked.insert(blocked.end(), {"--out", scratch_path("screen_blocked").string()});
  const CliResult res = run_cli(blocked);
  EXPECT_EQ(res.exit_code, 1);
  EXPECT_NE(res.output.find("parameter check failed"), std::string::npos) << res.output;
  EXPECT_NE(res.output.find("--warn-params"), std::string::npos) << res.output;

  std::vector<std::string> warned = base;
  warned.insert(warned.end(),
                {"--out", scratch_path("screen_warned").string(), "--warn-params"});
  const CliResult ok = run_cli(warned);
  EXPECT_EQ(ok.exit_code, 0) << ok.output;
  EXPECT_NE(ok.output.find("warning: discpred parameter check failed"), std::string::npos)
      << ok.output;
}

TEST(CliSweep, GridOrderIsAlgorithmThenRThenSeed) {
  const fs::path dir = scratch_path("sweep_grid");
  const CliResult res = run_cli({"sweep", "--set", "algorithm=wm,detpool", "--set",
                                 "stream=planted", "--set", "n=8", "--set", "t=64", "--set", "m=1",
                                 "--set", "r=0.25,0.5", "--seeds", "0..2", "--out", dir.string()});
  ASSERT_EQ(res.exit_code, 0) << res.output;
  EXPECT_NE(res.output.find("sweep: 12 cells"), std::string::npos) << res.output;

  const auto rows = lines_of(read_file(dir / "aggregate.csv"));
  ASSERT_EQ(rows.size(), 13u);
  EXPECT_EQ(rows[0], kSummaryHeader);
  const std::vector<std::string> want = {
      "wm_r0.25_s0",      "wm_r0.25_s1",      "wm_r0.25_s2",      "wm_r0.5_s0",
      "wm_r0.5_s1",       "wm_r0.5_s2",       "detpool_r0.25_s0", "detpool_r0.25_s1",
      "detpool_r0.25_s2", "detpool_r0.5_s0",  "detpool_r0.5_s1",  "detpool_r0.5_s2"};
  for (std::size_t i = 0; i < want.size(); ++i) {
    const auto f = fields_of(rows[i + 1]);
    ASSERT_EQ(f.size(), 19u) << rows[i + 1];
    EXPECT_EQ(f[0], want[i]);
    EXPECT_EQ(f[18], "ok") << rows[i + 1];
  }
}

TEST(CliSweep, ParallelRerunIsByteIdentical) {
  const fs::path dir1 = scratch_path("sweep_serial");
  const fs::path dir2 = scratch_path("sweep_parallel");
  const std::vector<std::string> base = {"sweep", "--set", "algorithm=wm,detpool",
                                         "--set", "stream=planted", "--set", "n=8",
                                         "--set", "t=64", "--set", "m=1",
                                         "--set", "r=0.25,0.5", "--seeds", "0..2"};
  std::vector<std::string> serial = base;
  serial.insert(serial.end(), {"--out", dir1.string(), "--jobs", "1"});
  std::vector<std::string> parallel = base;
  parallel.insert(parallel.end(), {"--out", dir2.string(), "--jobs", "3"});
  ASSERT_EQ(run_cli(serial).exit_code, 0);
  ASSERT_EQ(run_cli(parallel).exit_code, 0);
  EXPECT_EQ(read_file(dir1 / "aggregate.csv"), read_file(dir2 / "aggregate.csv"));
}

TEST(CliAttack, TrackerGameLeavesTranscriptAndStaysInBound) {
  const fs::path dir = scratch_path("attack_tracker");
  const CliResult res = run_cli({"attack", "--set", "algorithm=detpool", "--set", "n=8", "--set",
                                 "t=32", "--set", "m=2", "--set", "r=0.5", "--seed", "7", "--out",
                                 dir.string()});
  ASSERT_EQ(res.exit_code, 0) << res.output;
  EXPECT_NE(res.output.find("agreement-tracker_detpool_s7: mistakes="), std::string::npos)
      << res.output;

  const auto transcript =
      lines_of(read_file(dir / "transcript_agreement-tracker_detpool_s7.csv"));
  ASSERT_EQ(transcript.size(), 33u);
  EXPECT_EQ(transcript[0], "day,predictions,outcome,alg_prediction");
  for (std::size_t i = 1; i < transcript.size(); ++i) {
    const auto f = fields_of(transcript[i]);
    ASSERT_EQ(f.size(), 4u) << transcript[i];
    ASSERT_EQ(f[1].size(), 8u) << transcript[i];
    // the tracked favourite (expert 0 by default) is kept perfect
    EXPECT_EQ(f[1][0], f[2][0]) << transcript[i];
  }

  const auto summary = lines_of(read_file(dir / "summary.csv"));
  ASSERT_EQ(summary.size(), 2u);
  const auto f = fields_of(summary[1]);
  ASSERT_EQ(f.size(), 19u);
  EXPECT_EQ(f[2], "adaptive:agreement-tracker");
  EXPECT_EQ(f[5], "2");
  EXPECT_EQ(f[9], "0");  // designated best expert never errs
  EXPECT_EQ(f[18], "ok");
}

TEST(CliAttack, ObliviousReplaySmoke) {
  const fs::path dir = scratch_path("attack_replay");
  const CliResult res = run_cli({"attack", "--set", "adversary=oblivious-replay", "--set",
                                 "algorithm=wm", "--set", "stream=no", "--set", "n=8", "--set",
                                 "t=16", "--seed", "2", "--out", dir.string()});
  ASSERT_EQ(res.exit_code, 0) << res.output;
  const auto transcript = lines_of(read_file(dir / "transcript_oblivious-replay_wm_s2.csv"));
  EXPECT_EQ(transcript.size(), 17u);
  const auto summary = lines_of(read_file(dir / "summary.csv"));
  ASSERT_EQ(summary.size(), 2u);
  EXPECT_EQ(fields_of(summary[1])[2], "adaptive:oblivious-replay");
}

TEST(CliAttack, UnknownAdversaryIsRejected) {
  const CliResult res = run_cli({"attack", "--set", "adversary=bogus", "--set", "algorithm=wm",
                                 "--set", "n=4", "--set", "t=8", "--set", "r=0.5", "--out",
                                 scratch_path("attack_unknown").string()});
  EXPECT_EQ(res.exit_code, 1);
  EXPECT_NE(res.output.find("unknown adversary 'bogus'"), std::string::npos) << res.output;
}

TEST(CliDistinguish, WritesAlternatingResultRows) {
  const fs::path dir = scratch_path("distinguish_basic");
  const CliResult res = run_cli({"distinguish", "--set", "algorithm=mw", "--set", "n=16", "--set",
                                 "t=64", "--set", "m=8", "--set", "trials=10", "--set",
                                 "threshold=48", "--seed", "0", "--out", dir.string()});
  ASSERT_EQ(res.exit_code, 0) << res.output;
  EXPECT_NE(res.output.find("distinguish: accuracy="), std::string::npos) << res.output;
  EXPECT_NE(res.output.find("threshold=48"), std::string::npos) << res.output;

  const auto rows = lines_of(read_file(dir / "results.csv"));
  ASSERT_EQ(rows.size(), 21u);
  EXPECT_EQ(rows[0], "instance_id,label,correct_days,verdict,match");
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const auto f = fields_of(rows[i]);
    ASSERT_EQ(f.size(), 5u) << rows[i];
    const bool odd_row_is_yes = (i % 2) == 1;
    const std::string label = odd_row_is_yes ? "YES" : "NO";
    const std::string idx = std::to_string((i - 1) / 2);
    EXPECT_EQ(f[0], label + "_" + idx);
    EXPECT_EQ(f[1], label);
    EXPECT_TRUE(f[3] == "YES" || f[3] == "NO") << rows[i];
    EXPECT_TRUE(f[4] == "0" || f[4] == "1") << rows[i];
  }
}

TEST(CliDistinguish, SameSeedIsByteIdentical) {
  const fs::path dir1 = scratch_path("distinguish_rep1");
  const fs::path dir2 = scratch_path("distinguish_rep2");
  const std::vector<std::string> base = {"distinguish", "--set", "algorithm=mw",
                                         "--set",       "n=16",  "--set",
                                         "t=64",        "--set", "m=8",
                                         "--set",       "trials=5", "--seed", "11"};
  std::vector<std::string> first = base;
  first.insert(first.end(), {"--out", dir1.string()});
  std::vector<std::string> second = base;
  second.insert(second.end(), {"--out", dir2.string()});
  ASSERT_EQ(run_cli(first).exit_code, 0);
  ASSERT_EQ(run_cli(second).exit_code, 0);
  const std::string r1 = read_file(dir1 / "results.csv");
  EXPECT_FALSE(r1.empty());
  EXPECT_EQ(r1, read_file(dir2 / "results.csv"));
}

TEST(CliDistinguish, RejectsDegenerateThreshold) {
  const CliResult res = run_cli({"distinguish", "--set", "algorithm=wm", "--set", "n=8", "--set",
                                 "t=64", "--set", "m=8", "--set", "threshold=64", "--out",
                                 scratch_path("distinguish_badthr").string()});
  EXPECT_EQ(res.exit_code, 1);
  EXPECT_NE(res.output.find("threshold must lie in (0, T)"), std::string::npos) << res.output;
}

TEST(CliPlot, TraceSchemaRendersAnSvg) {
  const fs::path dir = scratch_path("plot_trace");
  ASSERT_EQ(run_cli({"simulate", "--set", "algorithm=wm", "--set", "stream=planted", "--set",
                     "n=8", "--set", "t=32", "--set", "m=2", "--set", "r=0.5", "--seed", "3",
                     "--out", dir.string()})
                .exit_code,
            0);
  const fs::path svg = dir / "trace.svg";
  const CliResult res =
      run_cli({"plot", (dir / "trace_wm_s3.csv").string(), "--out", svg.string()});
  ASSERT_EQ(res.exit_code, 0) << res.output;
  EXPECT_NE(res.output.find("plot: wrote"), std::string::npos) << res.output;
  const std::string body = read_file(svg);
  EXPECT_EQ(body.rfind("<?xml", 0), 0u);
  EXPECT_NE(body.find("<svg"), std::string::npos);

  const CliResult blocked =
      run_cli({"plot", (dir / "trace_wm_s3.csv").string(), "--out", svg.string()});
  EXPECT_EQ(blocked.exit_code, 1);
  EXPECT_NE(blocked.output.find("already exists"), std::string::npos) << blocked.output;
  EXPECT_EQ(run_cli({"plot", (dir / "trace_wm_s3.csv").string(), "--out", svg.string(),
                     "--force"})
                .exit_code,
            0);
}

TEST(CliPlot, SweepSchemaRendersAnSvg) {
  const fs::path dir = scratch_path("plot_sweep");
  ASSERT_EQ(run_cli({"sweep", "--set", "algorithm=wm", "--set", "stream=planted", "--set", "n=8",
                     "--set", "t=64", "--set", "m=1", "--set", "r=0.25,0.5", "--seeds", "0..1",
                     "--out", dir.string()})
                .exit_code,
            0);
  const fs::path svg = dir / "sweep.svg";
  const CliResult res =
      run_cli({"plot", (dir / "aggregate.csv").string(), "--out", svg.string()});
  ASSERT_EQ(res.exit_code, 0) << res.output;
  const std::string body = read_file(svg);
  EXPECT_EQ(body.rfind("<?xml", 0), 0u);
  EXPECT_NE(body.find("wm (mean)"), std::string::npos);
}

TEST(CliPlot, MissingColumnIsNamed) {
  const fs::path csv = scratch_path("plot_bad.csv");
  write_text(csv, "foo,bar\n1,2\n");
  const CliResult res =
      run_cli({"plot", csv.string(), "--out", scratch_path("plot_bad.svg").string()});
  EXPECT_EQ(res.exit_code, 1);
  EXPECT_NE(res.output.find("missing column 'avg_regret'"), std::string::npos) << res.output;
}

}  // namespace
