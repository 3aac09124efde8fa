#include <doctest.h>

#include <sstream>

#include "cli.hpp"
#include "seld/accddoa.hpp"
#include "seld/tensor_io.hpp"
#include "support.hpp"

using namespace seld;

namespace {

struct Result {
  int status;
  std::string out;
  std::string err;
};

Result run(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int status = cli::run(args, out, err);
  return {status, out.str(), err.str()};
}

}  // namespace

TEST_CASE("synth, features, labels, decode and eval chain") {
  test::TempDir dir;
  const std::string wav = (dir / "clip.wav").string(), csv = (dir / "clip.csv").string();
  REQUIRE(run({"synth", "audio", "-o", wav, "--az", "30", "--el", "10", "--duration", "3", "--csv", csv, "--class",
               "4"})
              .status == 0);
  const Result feat = run({"features", wav, "-o", (dir / "feat").string()});
  REQUIRE(feat.status == 0);
  const Tensor3f t = read_tensor(dir / "feat" / "clip_c0.tensor");
  CHECK(t.channels() == 7);
  CHECK(t.frames() == 480);
  CHECK(t.bins() == 128);

  const std::string labels = (dir / "labels.tensor").string(), pred = (dir / "pred.csv").string();
  REQUIRE(run({"encode-labels", csv, "-o", labels, "--frames", "30"}).status == 0);
  REQUIRE(run({"decode", labels, "-o", pred}).status == 0);
  const Result eval = run({"eval", "--pred", pred, "--ref", csv});
  CHECK(eval.status == 0);
  CHECK(eval.out.find("F1 100.0%") != std::string::npos);
}

TEST_CASE("augment rewrites labels") {
  test::TempDir dir;
  test::write_file(dir / "m.csv", "0,1,0,30,10,200\n");
  REQUIRE(run({"augment", "-t", "0", "--csv", (dir / "m.csv").string(), "-o", (dir / "out").string()}).status == 0);
  CHECK(test::slurp(dir / "out" / "m_acs0.csv") == "0,1,0,-60,-10,200\n");
}

TEST_CASE("errors exit with status 1") {
  test::TempDir dir;
  test::write_file(dir / "bad.conf", "x = 1\n");
  const Result r = run({"--config", (dir / "bad.conf").string(), "config"});
  CHECK(r.status == 1);
  CHECK(r.err.find("unknown config key 'x'") != std::string::npos);
  CHECK(run({"decode", (dir / "bad.conf").string(), "-o", (dir / "p.csv").string()}).status == 1);
  CHECK(run({"nonsense"}).status != 0);
}

TEST_CASE("config dump lists every key") {
  const Result r = run({"config"});
  CHECK(r.status == 0);
  CHECK(r.out.find("wpe.taps = 60") != std::string::npos);
}
