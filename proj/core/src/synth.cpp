#include "shapfoil/synth.hpp"

#include <cmath>
#include <random>
#include <sstream>

#include "shapfoil/strings.hpp"

namespace shapfoil {

namespace {

struct Box {
  double x0, x1, y0, y1;
  bool contains(double x, double y, double margin = 0.0) const {
    return x >= x0 - margin && x <= x1 + margin && y >= y0 - margin && y <= y1 + margin;
  }
};

std::string two_feature_schema(const std::string& pos, const std::string& neg) {
  return "feature f1 numeric\nfeature f2 numeric\ntarget class positive " + pos + "\n# negative: " +
         neg + "\n";
}

void emit_row(std::ostringstream& csv, double x, double y, const std::string& cls) {
  csv << format_double_roundtrip(std::round(x * 100.0) / 100.0) << ','
      << format_double_roundtrip(std::round(y * 100.0) / 100.0) << ',' << cls << '\n';
}

SynthFiles gen_clusters3(std::uint64_t seed, std::size_t size) {
  // Three separated red rectangles, each surrounded by a sparse ring of blue
  // points. Blues live only in the rings so every cluster stays learnable as
  // one axis-aligned box.
  const Box red_boxes[3] = {{3.0, 7.0, 13.5, 16.5}, {13.0, 17.0, 7.5, 10.5},
                            {23.0, 27.0, 1.5, 4.5}};
  const double ring_in = 1.0, ring_out = 3.5;
  std::mt19937_64 rng(seed * 0x9e3779b97f4a7c15ULL + 1);
  std::uniform_real_distribution<double> ux(0.0, 30.0), uy(0.0, 18.0), u01(0.0, 1.0);

  std::size_t n_blue = std::max<std::size_t>(6, size / 13);
  std::size_t n_red = size - n_blue;
  std::ostringstream csv;
  csv << "f1,f2,class\n";
  for (std::size_t i = 0; i < n_red; ++i) {
    const Box& b = red_boxes[i % 3];
    double x = b.x0 + u01(rng) * (b.x1 - b.x0);
    double y = b.y0 + u01(rng) * (b.y1 - b.y0);
    emit_row(csv, x, y, "red");
  }
  std::size_t placed = 0;
  while (placed < n_blue) {
    double x = ux(rng), y = uy(rng);
    bool in_ring = false, too_close = false;
    for (const Box& b : red_boxes) {
      if (b.contains(x, y, ring_in)) too_close = true;
      if (b.contains(x, y, ring_out)) in_ring = true;
    }
    if (too_close || !in_ring) continue;
    emit_row(csv, x, y, "blue");
    ++placed;
  }
  return {csv.str(), two_feature_schema("red", "blue")};
}

SynthFiles gen_nested(std::uint64_t seed, std::size_t size) {
  // L-shaped red region: a vertical arm and a horizontal arm sharing the
  // corner, with blue points only in the concave pocket. A support vector
  // near the corner pulls samples of both arms, so its min/max interval spans
  // the pocket and the clause is rejected; each arm then yields a clean
  // clause.
  const Box vertical{1.0, 3.5, 1.0, 11.0};
  const Box horizontal{1.0, 13.0, 1.0, 3.5};
  const Box pocket{5.5, 12.0, 5.5, 10.5};
  std::mt19937_64 rng(seed * 0x9e3779b97f4a7c15ULL + 2);
  std::uniform_real_distribution<double> u01(0.0, 1.0);

  std::size_t n_blue = std::max<std::size_t>(6, size / 4);
  std::size_t n_red = size - n_blue;
  std::ostringstream csv;
  csv << "f1,f2,class\n";
  for (std::size_t i = 0; i < n_red; ++i) {
    const Box& b = (i % 2 == 0) ? vertical : horizontal;
    double x = b.x0 + u01(rng) * (b.x1 - b.x0);
    double y = b.y0 + u01(rng) * (b.y1 - b.y0);
    emit_row(csv, x, y, "red");
  }
  for (std::size_t i = 0; i < n_blue; ++i) {
    double x = pocket.x0 + u01(rng) * (pocket.x1 - pocket.x0);
    double y = pocket.y0 + u01(rng) * (pocket.y1 - pocket.y0);
    emit_row(csv, x, y, "blue");
  }
  return {csv.str(), two_feature_schema("red", "blue")};
}

SynthFiles gen_xor4(std::uint64_t seed, std::size_t size) {
  const double centers[4][2] = {{0, 0}, {1, 1}, {0, 1}, {1, 0}};  // first two positive
  std::mt19937_64 rng(seed * 0x9e3779b97f4a7c15ULL + 3);
  std::normal_distribution<double> jitter(0.0, 0.05);
  std::ostringstream csv;
  csv << "f1,f2,class\n";
  if (size <= 4) size = 4;
  for (std::size_t i = 0; i < size; ++i) {
    const auto& c = centers[i % 4];
    double x = c[0], y = c[1];
    if (i >= 4) {  // keep the four canonical corners exact
      x += jitter(rng);
      y += jitter(rng);
    }
    emit_row(csv, x, y, i % 4 < 2 ? "pos" : "neg");
  }
  return {csv.str(), two_feature_schema("pos", "neg")};
}

}  // namespace

SynthFiles generate_synthetic(const std::string& name, std::uint64_t seed, std::size_t size) {
  if (name == "clusters3") return gen_clusters3(seed, size);
  if (name == "nested") return gen_nested(seed, size);
  if (name == "xor4") return gen_xor4(seed, size);
  throw DataError("unknown synthetic generator '" + name + "'");
}

Dataset synthetic_dataset(const std::string& name, std::uint64_t seed, std::size_t size) {
  SynthFiles files = generate_synthetic(name, seed, size);
  return parse_csv(files.csv, parse_schema_text(files.schema));
}

}  // namespace shapfoil
