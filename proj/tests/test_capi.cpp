#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstring>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "forge/forge.h"

namespace {

struct TempDir {
  std::filesystem::path path;
  TempDir() {
    path = std::filesystem::temp_directory_path() / "forge_capi_test";
    std::filesystem::remove_all(path);
    std::filesystem::create_directories(path);
  }
  ~TempDir() { std::filesystem::remove_all(path); }
  std::string str(const std::string& rel) const { return (path / rel).string(); }
};

int count_lines(const std::string& path) {
  std::ifstream in(path);
  REQUIRE(in.good());
  int n = 0;
  std::string line;
  while (std::getline(in, line))
    if (!line.empty()) ++n;
  return n;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  REQUIRE(in.good());
  return std::string(std::istreambuf_iterator<char>(in), {});
}

}  // namespace

TEST_CASE("version and error handling basics") {
  CHECK(std::strlen(forge_version()) > 0);
  forge_ctx* ctx = forge_ctx_new();
  REQUIRE(ctx != nullptr);
  CHECK(forge_gen(ctx, "bogus-task", 1, 0, nullptr, nullptr, "/dev/null") != 0);
  CHECK(std::strlen(forge_last_error(ctx)) > 0);
  CHECK(forge_gen(nullptr, "letcat", 1, 0, nullptr, nullptr, "/dev/null") != 0);
  forge_ctx_free(ctx);
  forge_ctx_free(nullptr);  // must be a no-op
}

TEST_CASE("gen -> perturb -> select -> render pipeline through the shared library") {
  TempDir dir;
  forge_ctx* ctx = forge_ctx_new();

  REQUIRE(forge_gen(ctx, "letcat", 12, 5, "standard", nullptr,
                    dir.str("pool.jsonl").c_str()) == 0);
  CHECK(count_lines(dir.str("pool.jsonl")) == 12);

  for (const char* kind : {"mask1", "mask2", "incorrect", "random", "nonl"}) {
    REQUIRE(forge_perturb(ctx, kind, "_", 1, dir.str("pool.jsonl").c_str(),
                          dir.str(std::string("pool_") + kind + ".jsonl").c_str()) == 0);
    CHECK(count_lines(dir.str(std::string("pool_") + kind + ".jsonl")) == 12);
  }
  CHECK(forge_perturb(ctx, "unknown", "", 0, dir.str("pool.jsonl").c_str(),
                      dir.str("x.jsonl").c_str()) != 0);

  // queries: reuse the generated questions via a second generation run
  REQUIRE(forge_gen(ctx, "letcat", 3, 6, "standard", nullptr,
                    dir.str("qpool.jsonl").c_str()) == 0);
  {
    std::ifstream in(dir.str("qpool.jsonl"));
    std::ofstream out(dir.str("queries.jsonl"));
    std::string line;
    while (std::getline(in, line)) out << line << "\n";
  }

  REQUIRE(forge_select(ctx, "random", 4, 0.5, nullptr, dir.str("pool.jsonl").c_str(),
                       dir.str("queries.jsonl").c_str(), nullptr, nullptr, "m", 11,
                       dir.str("sel.jsonl").c_str()) == 0);
  CHECK(count_lines(dir.str("sel.jsonl")) == 3);

  REQUIRE(forge_render(ctx, dir.str("pool.jsonl").c_str(), dir.str("queries.jsonl").c_str(),
                       dir.str("sel.jsonl").c_str(), dir.str("prompts.jsonl").c_str()) == 0);
  CHECK(count_lines(dir.str("prompts.jsonl")) == 3);
  CHECK(slurp(dir.str("prompts.jsonl")).find("Q: ") != std::string::npos);

  forge_ctx_free(ctx);
}

TEST_CASE("run + report through the shared library") {
  TempDir dir;
  forge_ctx* ctx = forge_ctx_new();
  REQUIRE(forge_gen(ctx, "coinflip", 10, 2, nullptr, nullptr,
                    dir.str("pool.jsonl").c_str()) == 0);
  REQUIRE(forge_gen(ctx, "coinflip", 4, 3, nullptr, nullptr,
                    dir.str("queries.jsonl").c_str()) == 0);
  std::string cfg = std::string("{\n") +
      "\"task\": \"coinflip\",\n" +
      "\"pool\": \"" + dir.str("pool.jsonl") + "\",\n" +
      "\"queries\": \"" + dir.str("queries.jsonl") + "\",\n" +
      "\"strategy\": \"random\",\n\"shots\": 4,\n\"seed\": 1,\n" +
      "\"backend\": {\"kind\": \"faithful_mock\"},\n" +
      "\"cache_dir\": \"" + dir.str("cache") + "\"\n}";
  {
    std::ofstream out(dir.str("run.json"));
    out << cfg;
  }
  REQUIRE(forge_run(ctx, dir.str("run.json").c_str(), dir.str("manifest.jsonl").c_str()) == 0);
  CHECK(count_lines(dir.str("manifest.jsonl")) >= 5);  // 4 records + summary

  std::string m = dir.str("manifest.jsonl");
  const char* paths[] = {m.c_str()};
  REQUIRE(forge_report(ctx, paths, 1, dir.str("report.txt").c_str(),
                       dir.str("report.json").c_str()) == 0);
  CHECK(slurp(dir.str("report.txt")).find("coinflip") != std::string::npos);
  CHECK(!slurp(dir.str("report.json")).empty());
  forge_ctx_free(ctx);
}
