/*
 * Copyright 2026 The Stress Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "stress/external.h"

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <spawn.h>
#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <cerrno>
#include <chrono>
#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>

#include "stress/error.h"

extern char** environ;

namespace stress {

ExternalPipeline ExternalPipeline::FromJson(const nlohmann::json& json) {
  ExternalPipeline ext;
  try {
    const auto& command = json.at("command");
    if (command.is_string()) {
      ext.command = {command.get<std::string>()};
    } else {
      ext.command = command.get<std::vector<std::string>>();
    }
    ext.timeout_seconds = json.value("timeout", ext.timeout_seconds);
    ext.metric_key = json.value("metric_key", ext.metric_key);
  } catch (const nlohmann::json::exception& e) {
    throw StressError(ErrorCode::kConfig, std::string("external: ") + e.what());
  }
  if (ext.command.empty() || ext.command[0].empty()) {
    throw StressError(ErrorCode::kConfig, "external: empty command");
  }
  if (!(ext.timeout_seconds > 0)) throw StressError(ErrorCode::kConfig, "external: timeout must be > 0");
  return ext;
}

nlohmann::ordered_json ExternalPipeline::ToJson() const {
  return {{"command", command}, {"timeout", timeout_seconds}, {"metric_key", metric_key}};
}

namespace {

// Scoped mkdtemp directory, removed recursively on destruction.
class TempDir {
 public:
  TempDir() {
    std::string templ = (std::filesystem::temp_directory_path() / "stress-ext-XXXXXX").string();
    if (mkdtemp(templ.data()) == nullptr) {
      throw StressError(ErrorCode::kIo, std::string("mkdtemp: ") + std::strerror(errno));
    }
    path_ = templ;
  }
  ~TempDir() {
    std::error_code ignored;
    std::filesystem::remove_all(path_, ignored);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

class Fd {
 public:
  explicit Fd(int fd = -1) : fd_(fd) {}
  ~Fd() { reset(); }
  Fd(const Fd&) = delete;
  Fd& operator=(const Fd&) = delete;
  int get() const { return fd_; }
  void reset() {
    if (fd_ >= 0) close(fd_);
    fd_ = -1;
  }

 private:
  int fd_;
};

struct ChildResult {
  std::string out;
  int status = 0;
};

ChildResult RunChild(const std::vector<std::string>& argv, double timeout_seconds) {
  int pipe_fds[2];
  if (pipe2(pipe_fds, O_CLOEXEC) != 0) {
    throw StressError(ErrorCode::kExternalSpawn, std::string("pipe: ") + std::strerror(errno));
  }
  Fd read_end(pipe_fds[0]);
  Fd write_end(pipe_fds[1]);

  posix_spawn_file_actions_t actions;
  posix_spawn_file_actions_init(&actions);
  posix_spawn_file_actions_adddup2(&actions, write_end.get(), STDOUT_FILENO);
  posix_spawn_file_actions_addopen(&actions, STDIN_FILENO, "/dev/null", O_RDONLY, 0);

  std::vector<char*> args;
  for (const std::string& a : argv) args.push_back(const_cast<char*>(a.c_str()));
  args.push_back(nullptr);

  pid_t pid = 0;
  const int rc = posix_spawnp(&pid, args[0], &actions, nullptr, args.data(), environ);
  posix_spawn_file_actions_destroy(&actions);
  if (rc != 0) {
    throw StressError(ErrorCode::kExternalSpawn,
                      "cannot start '" + argv[0] + "': " + std::strerror(rc));
  }
  write_end.reset();

  ChildResult result;
  const auto deadline = std::chrono::steady_clock::now() +
                        std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                            std::chrono::duration<double>(timeout_seconds));
  bool timed_out = false;
  char buffer[4096];
  while (true) {
    const auto left = std::chrono::duration_cast<std::chrono::milliseconds>(
        deadline - std::chrono::steady_clock::now());
    if (left.count() <= 0) {
      timed_out = true;
      break;
    }
    pollfd pfd{read_end.get(), POLLIN, 0};
    const int ready = poll(&pfd, 1, static_cast<int>(std::min<int64_t>(left.count(), 1000)));
    if (ready < 0) {
      if (errno == EINTR) continue;
      break;
    }
    if (ready == 0) continue;
    const ssize_t got = read(read_end.get(), buffer, sizeof(buffer));
    if (got < 0) {
      if (errno == EINTR) continue;
      break;
    }
    if (got == 0) break;
    result.out.append(buffer, static_cast<size_t>(got));
  }
  // A child may close stdout and keep running; the deadline still applies.
  while (!timed_out) {
    const pid_t done = waitpid(pid, &result.status, WNOHANG);
    if (done == pid || (done < 0 && errno != EINTR)) break;
    if (std::chrono::steady_clock::now() >= deadline) {
      timed_out = true;
      break;
    }
    usleep(2000);
  }
  if (timed_out) {
    kill(pid, SIGKILL);
    while (waitpid(pid, &result.status, 0) < 0 && errno == EINTR) {
    }
  }
  if (timed_out) {
    throw StressError(ErrorCode::kExternalTimeout,
                      "'" + argv[0] + "' timed out after " + std::to_string(timeout_seconds) + " s");
  }
  return result;
}

}  // namespace

double ExternalEvaluate(const ExternalPipeline& pipeline, const Dataset& train, const Dataset& test) {
  if (pipeline.command.empty()) throw StressError(ErrorCode::kExternalSpawn, "empty command");
  TempDir dir;
  const auto train_path = dir.path() / "train.csv";
  const auto test_path = dir.path() / "test.csv";
  const auto schema_path = dir.path() / "schema.json";
  WriteCsv(train, train_path);
  WriteCsv(test, test_path);
  {
    std::ofstream out(schema_path);
    out << train.schema().ToJson().dump(2) << "\n";
    if (!out) throw StressError(ErrorCode::kIo, "cannot write " + schema_path.string());
  }

  std::vector<std::string> argv = pipeline.command;
  argv.insert(argv.end(), {"--train", train_path.string(), "--test", test_path.string(),
                           "--schema", schema_path.string()});
  const ChildResult child = RunChild(argv, pipeline.timeout_seconds);
  if (!WIFEXITED(child.status) || WEXITSTATUS(child.status) != 0) {
    const std::string how = WIFEXITED(child.status)
                                ? "exit status " + std::to_string(WEXITSTATUS(child.status))
                                : "signal " + std::to_string(WTERMSIG(child.status));
    throw StressError(ErrorCode::kExternalExit, "'" + argv[0] + "' failed with " + how);
  }

  nlohmann::json parsed;
  try {
    parsed = nlohmann::json::parse(child.out);
  } catch (const nlohmann::json::parse_error& e) {
    throw StressError(ErrorCode::kExternalOutput,
                      "stdout is not a single JSON object: " + std::string(e.what()));
  }
  if (!parsed.is_object()) throw StressError(ErrorCode::kExternalOutput, "stdout is not a JSON object");
  const auto it = parsed.find(pipeline.metric_key);
  if (it == parsed.end()) {
    throw StressError(ErrorCode::kExternalMissingMetric, "no '" + pipeline.metric_key + "' in output");
  }
  if (!it->is_number() || !std::isfinite(it->get<double>())) {
    throw StressError(ErrorCode::kExternalIllTypedMetric,
                      "'" + pipeline.metric_key + "' is not a finite number");
  }
  return it->get<double>();
}

}  // namespace stress
