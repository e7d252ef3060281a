// sealvault command-line tool.

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>

#include "cli_support.hpp"
#include "sealvault/bench/bench.hpp"
#include "sealvault/common/file_io.hpp"
#include "sealvault/sync/object_server.hpp"
#include "sealvault/sync/sync.hpp"
#include "sealvault/vault/vault.hpp"

namespace sealvault::cli {
namespace {

struct Globals {
  std::optional<fs::path> vault;
  std::optional<int> password_fd;
  std::optional<fs::path> seed_file;
  bool verbose = false;
};

Globals g;

void log(const std::string& msg) {
  if (g.verbose) std::cerr << "sealvault: " << msg << "\n";
}

const fs::path& vault_root() {
  if (!g.vault) throw Error(ErrorCode::kInvalidArgument, "--vault is required");
  return *g.vault;
}

/// Loads the config, checks the platform source, then asks for the password.
vault::Vault open_vault() {
  const fs::path& root = vault_root();
  vault::VaultConfig config = vault::load_config(root);
  std::optional<tee::PlatformIdentity> platform;
  if (config.mode == modes::ModeId::kSealed) {
    auto seed = seed_file_source(g.seed_file);
    if (!seed) {
      throw Error(ErrorCode::kMissingPlatform,
                  "sealed vault needs --platform-seed-file or " + std::string(kSeedFileEnv));
    }
    platform = load_platform(*seed);
  }
  log("unlocking " + root.string() + " (" + std::string(modes::mode_name(config.mode)) + ")");
  Secret password = obtain_password(g.password_fd, false);
  return vault::Vault::unlock(root, password.view(), platform);
}

std::unique_ptr<FileLock> lock_vault() {
  return std::make_unique<FileLock>(vault_root() / std::string(vault::kLockFileName));
}

int cmd_init(const std::string& mode_text, std::uint32_t iterations) {
  const fs::path& root = vault_root();
  auto mode = modes::parse_mode(mode_text);
  if (!mode) throw Error(ErrorCode::kInvalidArgument, "unknown mode '" + mode_text + "'");
  if (fs::exists(root) && (!fs::is_directory(root) || !fs::is_empty(root))) {
    throw Error(ErrorCode::kTargetNotEmpty, root.string() + " is not empty");
  }
  std::optional<tee::PlatformIdentity> platform;
  if (*mode == modes::ModeId::kSealed) {
    auto seed = seed_file_source(g.seed_file);
    if (!seed) {
      throw Error(ErrorCode::kMissingPlatform,
                  "sealed mode needs --platform-seed-file or " + std::string(kSeedFileEnv));
    }
    platform = load_platform(*seed);
  }
  Secret password = obtain_password(g.password_fd, true);
  vault::CreateOptions opts;
  opts.kdf_iterations = iterations;
  vault::create_vault(root, password.view(), *mode, platform, opts);
  std::cout << "initialized " << modes::mode_name(*mode) << " vault at " << root.string() << "\n";
  return kExitOk;
}

int cmd_put(const std::string& src, const std::string& vpath) {
  auto lock = lock_vault();
  vault::Vault v = open_vault();
  std::uint64_t n;
  if (src == "-") {
    n = v.write_file(vpath, std::cin);
  } else {
    std::ifstream in(src, std::ios::binary);
    if (!in) throw Error(ErrorCode::kNotFound, "cannot open " + src);
    n = v.write_file(vpath, in);
  }
  log("stored " + std::to_string(n) + " bytes at " + vpath);
  return kExitOk;
}

int cmd_get(const std::string& vpath, const std::string& dst) {
  vault::Vault v = open_vault();
  if (dst == "-") {
    v.read_file(vpath, std::cout);
    std::cout.flush();
    return kExitOk;
  }
  fs::path target(dst);
  fs::path dir = target.parent_path().empty() ? fs::path(".") : target.parent_path();
  fs::path tmp = temp_path_in(dir);
  try {
    {
      std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
      if (!out) throw Error(ErrorCode::kIo, "cannot create " + tmp.string());
      v.read_file(vpath, out);
      out.close();
      if (!out) throw Error(ErrorCode::kIo, "cannot write " + tmp.string());
    }
    fs::rename(tmp, target);
  } catch (...) {
    std::error_code ec;
    fs::remove(tmp, ec);
    throw;
  }
  log("wrote " + target.string());
  return kExitOk;
}

int cmd_ls(const std::string& vpath) {
  vault::Vault v = open_vault();
  for (const auto& e : v.list_dir(vpath)) {
    switch (e.kind) {
      case vault::EntryKind::kDirectory:
        std::cout << "d\t-\t" << e.name << "\n";
        break;
      case vault::EntryKind::kFile:
        std::cout << "f\t" << (e.size ? std::to_string(*e.size) : "?") << "\t" << e.name << "\n";
        break;
      case vault::EntryKind::kUnreadable:
        std::cout << "?\t-\t" << e.name << " (unreadable)\n";
        break;
    }
  }
  return kExitOk;
}

int cmd_sync(const std::string& remote, const std::optional<fs::path>& token_file,
             std::size_t parallel) {
  const fs::path& root = vault_root();
  vault::load_config(root);
  Secret token = token_file ? read_secret_file(*token_file) : Secret();
  auto store = sync::open_store(remote, std::string(token.view()));
  auto lock = lock_vault();
  log("syncing " + root.string() + " with " + remote);
  sync::SyncOptions opts;
  opts.parallelism = parallel;
  sync::SyncReport r = sync::sync_vault(root, *store, opts);
  std::cout << "pushed=" << r.pushed << " pulled=" << r.pulled << " conflicts=" << r.conflicts
            << "\n";
  if (r.deleted_local || r.deleted_remote) {
    std::cout << "deleted_remote=" << r.deleted_remote << " deleted_local=" << r.deleted_local
              << "\n";
  }
  for (const auto& key : r.conflict_keys) std::cout << "conflict: " << key << "\n";
  return kExitOk;
}

struct BenchArgs {
  std::vector<std::string> modes{"PLAIN", "V1", "SEALED"};
  std::vector<std::string> workloads{"SINGLE"};
  std::vector<std::string> directions{"READ", "WRITE"};
  std::size_t reps = 10;
  std::uint64_t size = bench::kDefaultSingleSize;
  std::size_t files = 0;
  std::uint64_t seed = 1;
  std::optional<fs::path> scratch;
  std::optional<fs::path> out;
  std::size_t parallel = 1;
};

int cmd_bench(const BenchArgs& a) {
  bench::BenchConfig c;
  for (const auto& m : a.modes) {
    auto mode = bench::parse_storage_mode(m);
    if (!mode) throw Error(ErrorCode::kInvalidArgument, "unknown bench mode '" + m + "'");
    c.modes.push_back(*mode);
  }
  std::vector<bench::WorkloadKind> kinds;
  for (const auto& w : a.workloads) {
    auto kind = bench::parse_workload(w);
    if (!kind) throw Error(ErrorCode::kInvalidArgument, "unknown workload '" + w + "'");
    kinds.push_back(*kind);
  }
  c.directions.clear();
  for (const auto& d : a.directions) {
    auto dir = bench::parse_direction(d);
    if (!dir) throw Error(ErrorCode::kInvalidArgument, "unknown direction '" + d + "'");
    c.directions.push_back(*dir);
  }
  if (std::find(c.modes.begin(), c.modes.end(), bench::StorageMode::kSealed) != c.modes.end()) {
    auto seed = seed_file_source(g.seed_file);
    if (!seed) {
      throw Error(ErrorCode::kMissingPlatform,
                  "SEALED bench needs --platform-seed-file or " + std::string(kSeedFileEnv));
    }
    c.platform = load_platform(*seed);
  }
  fs::path scratch = a.scratch ? *a.scratch
                               : fs::temp_directory_path() /
                                     ("sealvault-bench-" + std::to_string(::getpid()));
  bool own_scratch = !a.scratch;
  fs::create_directories(scratch);
  struct Cleanup {
    fs::path p;
    bool on;
    ~Cleanup() {
      std::error_code ec;
      if (on) fs::remove_all(p, ec);
    }
  } cleanup{scratch, own_scratch};

  for (auto kind : kinds) {
    bench::WorkloadSpec spec{kind, a.size, kind == bench::WorkloadKind::kTree ? a.files : 0, a.seed};
    log("staging " + std::string(bench::workload_label(kind)) + " workload");
    c.workloads.push_back(
        bench::generate_workload(spec, scratch / "staging" / std::string(bench::workload_label(kind))));
  }
  c.scratch = scratch / "run";
  c.repetitions = a.reps;
  c.parallelism = a.parallel;
  c.on_record = [](const bench::BenchRecord& r) {
    log(std::string(bench::mode_label(r.mode)) + " " + std::string(bench::workload_label(r.workload)) +
        " " + std::string(bench::direction_label(r.direction)) + " rep " + std::to_string(r.rep) +
        ": " + std::to_string(r.mbps) + " MB/s");
  };
  auto records = bench::run_bench(c);
  if (a.out) write_file_atomic(*a.out, as_bytes(bench::to_csv(records)));
  std::cout << bench::format_summary(bench::summarize(records));
  return kExitOk;
}

int cmd_serve(const fs::path& storage, const std::string& host, int port,
              const std::optional<fs::path>& token_file) {
  Secret token = token_file ? read_secret_file(*token_file) : Secret();
  sync::ObjectServer server(storage, std::string(token.view()));
  std::cout << "serving " << storage.string() << " on http://" << host << ":" << port << std::endl;
  server.serve_forever(host, port);
  return kExitOk;
}

int run(int argc, char** argv) {
  CLI::App app{"sealvault: client-side encrypted vault with a simulated enclave mode"};
  app.require_subcommand(1);
  app.fallthrough();
  app.option_defaults()->always_capture_default();
  app.add_option("--vault", g.vault, "vault root directory");
  app.add_option("--password-fd", g.password_fd,
                 "read the password from this file descriptor instead of prompting");
  app.add_option("--platform-seed-file", g.seed_file,
                 std::string("platform seed for sealed mode (default: $") + kSeedFileEnv + ")");
  app.add_flag("-v,--verbose", g.verbose, "log progress to stderr");

  std::function<int()> action;

  std::string mode = "v1";
  std::uint32_t iterations = modes::kDefaultKdfIterations;
  auto* init = app.add_subcommand("init", "create a new vault");
  init->add_option("--mode", mode, "v1 or sealed")->check(CLI::IsMember({"v1", "sealed"}));
  init->add_option("--kdf-iterations", iterations, "PBKDF2 iterations")->check(CLI::PositiveNumber);
  init->callback([&] { action = [&] { return cmd_init(mode, iterations); }; });

  std::string src, dst, vpath, from, to;
  auto* put = app.add_subcommand("put", "store a file (src '-' reads stdin)");
  put->add_option("src", src)->required();
  put->add_option("vpath", vpath)->required();
  put->callback([&] { action = [&] { return cmd_put(src, vpath); }; });

  auto* get = app.add_subcommand("get", "extract a file (dst '-' writes stdout)");
  get->add_option("vpath", vpath)->required();
  get->add_option("dst", dst)->required();
  get->callback([&] { action = [&] { return cmd_get(vpath, dst); }; });

  std::string ls_path = "/";
  auto* ls = app.add_subcommand("ls", "list a directory");
  ls->add_option("vpath", ls_path);
  ls->callback([&] { action = [&] { return cmd_ls(ls_path); }; });

  auto* rm = app.add_subcommand("rm", "remove a file or empty directory");
  rm->add_option("vpath", vpath)->required();
  rm->callback([&] {
    action = [&] {
      auto lock = lock_vault();
      open_vault().remove(vpath);
      return int{kExitOk};
    };
  });

  auto* mv = app.add_subcommand("mv", "rename or move");
  mv->add_option("from", from)->required();
  mv->add_option("to", to)->required();
  mv->callback([&] {
    action = [&] {
      auto lock = lock_vault();
      open_vault().rename(from, to);
      return int{kExitOk};
    };
  });

  auto* mkdir = app.add_subcommand("mkdir", "create a directory and missing parents");
  mkdir->add_option("vpath", vpath)->required();
  mkdir->callback([&] {
    action = [&] {
      auto lock = lock_vault();
      open_vault().make_dir(vpath);
      return int{kExitOk};
    };
  });

  std::string remote;
  std::optional<fs::path> token_file;
  std::size_t parallel = 1;
  auto* sync_cmd = app.add_subcommand("sync", "synchronize the encrypted tree with a remote");
  sync_cmd->add_option("--remote", remote, "http://host:port[/base] or a directory")->required();
  sync_cmd->add_option("--token-file", token_file, "file holding the bearer token");
  sync_cmd->add_option("--parallel", parallel, "concurrent transfers")->check(CLI::PositiveNumber);
  sync_cmd->callback([&] { action = [&] { return cmd_sync(remote, token_file, parallel); }; });

  BenchArgs bargs;
  auto* bench_cmd = app.add_subcommand("bench", "timed transfer benchmark");
  bench_cmd->add_option("--modes", bargs.modes, "PLAIN, V1, SEALED")->delimiter(',');
  bench_cmd->add_option("--workload", bargs.workloads, "SINGLE, TREE")->delimiter(',');
  bench_cmd->add_option("--directions", bargs.directions, "READ, WRITE")->delimiter(',');
  bench_cmd->add_option("--reps", bargs.reps, "repetitions per cell")->check(CLI::PositiveNumber);
  bench_cmd->add_option("--size", bargs.size, "bytes per workload (e.g. 1MiB)")
      ->transform(CLI::AsSizeValue(false));
  bench_cmd->add_option("--files", bargs.files, "TREE file count (0 = derive)");
  bench_cmd->add_option("--seed", bargs.seed, "corpus seed");
  bench_cmd->add_option("--scratch", bargs.scratch, "working directory (default: temporary)");
  bench_cmd->add_option("--out", bargs.out, "CSV output path");
  bench_cmd->add_option("--parallel", bargs.parallel, "files in flight per repetition")
      ->check(CLI::PositiveNumber);
  bench_cmd->callback([&] { action = [&] { return cmd_bench(bargs); }; });

  auto* dump = app.add_subcommand("dump-config", "print the vault config");
  dump->callback([&] {
    action = [&] {
      std::cout << vault::dump_config(vault::load_config(vault_root()));
      return int{kExitOk};
    };
  });

  fs::path storage;
  std::string host = "127.0.0.1";
  int port = 8080;
  std::optional<fs::path> serve_token;
  auto* serve = app.add_subcommand("serve", "run the reference HTTP object server");
  serve->add_option("--storage", storage, "directory holding the objects")->required();
  serve->add_option("--host", host);
  serve->add_option("--port", port);
  serve->add_option("--token-file", serve_token, "file holding the required bearer token");
  serve->callback([&] { action = [&] { return cmd_serve(storage, host, port, serve_token); }; });

  auto* mount = app.add_subcommand("mount", "reserved for an OS filesystem mount");
  mount->allow_extras();
  mount->callback([&] {
    action = [] {
      std::cerr << "sealvault: mount is not available in this build\n";
      return int{kExitGeneric};
    };
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    return action();
  } catch (const Error& e) {
    std::cerr << "sealvault: " << e.what() << "\n";
    return exit_code_for(e.code());
  } catch (const fs::filesystem_error& e) {
    std::cerr << "sealvault: " << e.what() << "\n";
    return kExitGeneric;
  } catch (const std::exception& e) {
    std::cerr << "sealvault: " << e.what() << "\n";
    return kExitGeneric;
  }
}

}  // namespace
}  // namespace sealvault::cli

int main(int argc, char** argv) { return sealvault::cli::run(argc, argv); }
