#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out;
};

Run run(const std::string& args) {
  static int n = 0;
  const fs::path out = fs::temp_directory_path() / ("dre_cli_" + std::to_string(::getpid()) + "_" + std::to_string(n++));
  const std::string cmd = std::string(DRE_SIM_BIN) + " " + args + " > " + out.string() + " 2>/dev/null";
  const int status = std::system(cmd.c_str());
  std::ifstream in(out);
  std::stringstream ss;
  ss << in.rdbuf();
  fs::remove(out);
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, ss.str()};
}

fs::path write_temp(const std::string& name, const std::string& text) {
  const fs::path p = fs::temp_directory_path() / (name + std::to_string(::getpid()));
  std::ofstream(p) << text;
  return p;
}

std::size_t lines(const std::string& s) { return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n')); }

}  // namespace

TEST_CASE("cli: dist prints the SIFT table") {
  const Run r = run("dist --k 4 --m 512");
  CHECK(r.code == 0);
  CHECK(r.out.find("4,0.875214,1") != std::string::npos);
}

TEST_CASE("cli: exit codes") {
  CHECK(run("").code == 1);
  CHECK(run("frobnicate").code == 1);
  CHECK(run("dist --k x --m 2").code == 1);
  CHECK(run("simulate --config /nonexistent/file.cfg").code == 2);
  const fs::path bad = write_temp("dre_bad_cfg", "protocol = ierap\nchannels = 0\n");
  CHECK(run("simulate --config " + bad.string()).code == 2);
  fs::remove(bad);
  CHECK(run("sweep --preset nope --readers 100 --seeds 1").code == 2);
}

TEST_CASE("cli: simulate and replay") {
  const fs::path cfg = write_temp("dre_ok_cfg", "protocol = ierap\nreaders = 20\nrounds = 3\narena_x = 60\narena_y = 60\n");
  const Run a = run("simulate --config " + cfg.string() + " --seed 9");
  CHECK(a.code == 0);
  CHECK(lines(a.out) == 2);
  CHECK(a.out.find("ierap,20,4,9,3,") != std::string::npos);

  const fs::path events = fs::temp_directory_path() / ("dre_events" + std::to_string(::getpid()));
  const Run b = run("replay --config " + cfg.string() + " --seed 9 --events " + events.string());
  CHECK(b.code == 0);
  CHECK(b.out == a.out);
  std::ifstream in(events);
  std::string first;
  std::getline(in, first);
  CHECK(first.find("msgA") != std::string::npos);
  fs::remove(events);
  fs::remove(cfg);
}

TEST_CASE("cli: sweep counts rows") {
  const Run r = run("sweep --preset scenario1 --readers 100 --seeds 2 --rounds 2");
  CHECK(r.code == 0);
  CHECK(lines(r.out) == 9);
  const Run again = run("sweep --preset scenario1 --readers 100 --seeds 2 --rounds 2");
  CHECK(again.out == r.out);
}
