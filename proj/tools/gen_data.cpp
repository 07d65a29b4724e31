// Regenerates the bundled fixtures and constellations under data/.
// Usage: sldlab_gen_data <data-dir>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>

#include "sldlab/io.hpp"
#include "sldlab/sldlab.hpp"

using namespace sldlab;
namespace fs = std::filesystem;

namespace {

void write(const fs::path& path, const io::json& j) {
  fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  out << j.dump(2) << '\n';
}

// Probabilities proportional to 1..n, last one absorbing the rounding.
Constellation weighted(std::vector<TrigPoly> sigs) {
  const double n = static_cast<double>(sigs.size());
  std::vector<Constellation::Point> pts;
  double used = 0.0;
  for (std::size_t i = 0; i < sigs.size(); ++i) {
    double p = 2.0 * static_cast<double>(i + 1) / (n * (n + 1.0));
    if (i + 1 == sigs.size()) p = 1.0 - used;
    used += p;
    pts.push_back({std::move(sigs[i]), p});
  }
  return Constellation(std::move(pts));
}

}  // namespace

int main(int argc, char** argv) {
  if (argc != 2) {
    std::cerr << "usage: sldlab_gen_data <data-dir>\n";
    return 1;
  }
  const fs::path dir = argv[1];

  write(dir / "signal_b011.json", io::to_json(TrigPoly({0.0, 1.0, 1.0})));
  write(dir / "autocorr_b011.json", io::to_json(autocorrelation(TrigPoly({0.0, 1.0, 1.0}))));
  write(dir / "autocorr_flat.json", io::to_json(AutocorrSeq({0.0, 0.0, 1.0, 0.0, 0.0})));
  write(dir / "poly_z_minus_2.json", io::to_json(CoeffPoly({-2.0, 1.0})));
  write(dir / "poly_2z_minus_1.json", io::to_json(CoeffPoly({-1.0, 2.0})));
  write(dir / "poly_z_minus_3.json", io::to_json(CoeffPoly({-3.0, 1.0})));

  for (int m = 1; m <= 4; ++m) {
    std::mt19937_64 rng(7000 + static_cast<std::uint64_t>(m));
    const TrigPoly p = random_signal(m, rng);
    const ClassSet cs = enumerate_classes(p);
    const std::string tag = "m" + std::to_string(m);

    write(dir / "constellations" / (tag + "_flip_classes.json"), io::to_json(Constellation::uniform(cs.representatives)));

    std::vector<TrigPoly> mixed(cs.representatives.begin(), cs.representatives.begin() + cs.exact_count / 2);
    for (int i = 0; i < 3; ++i) mixed.push_back(random_signal(m, rng));
    write(dir / "constellations" / (tag + "_mixed.json"), io::to_json(weighted(std::move(mixed))));

    std::vector<TrigPoly> distinct;
    for (int i = 0; i < 6; ++i) distinct.push_back(random_signal(m, rng));
    write(dir / "constellations" / (tag + "_distinct.json"), io::to_json(Constellation::uniform(std::move(distinct))));
  }
  return 0;
}
