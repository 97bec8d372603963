#include "fdasynth/distance.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>

#include "fdasynth/align.hpp"
#include "fdasynth/parallel.hpp"

static_assert(std::endian::native == std::endian::little,
              "distance matrix files are little-endian; big-endian hosts unsupported");

namespace fdasynth {

void DistanceMatrix::remix(double new_delta) {
  if (new_delta < 0.0 || new_delta > 1.0)
    throw validation_error("delta must lie in [0,1]");
  delta = new_delta;
  for (size_t k = 0; k < combined.size(); ++k)
    combined[k] = delta * amplitude[k] + (1.0 - delta) * phase[k];
}

std::vector<Srvf> dataset_srvfs(const CurveDataset& dataset) {
  std::vector<Srvf> srvfs;
  srvfs.reserve(dataset.curves.size());
  for (const auto& c : dataset.curves) srvfs.push_back(to_srvf(c, dataset.grid));
  return srvfs;
}

DistanceMatrix distance_matrix(const std::vector<Srvf>& srvfs, const Grid& g, double delta,
                               int jobs) {
  if (delta < 0.0 || delta > 1.0) throw validation_error("delta must lie in [0,1]");
  if (srvfs.empty()) throw validation_error("distance matrix of empty dataset");
  const int n = static_cast<int>(srvfs.size());
  DistanceMatrix m;
  m.n = n;
  m.delta = delta;
  m.amplitude.assign(static_cast<size_t>(n) * n, 0.0);
  m.phase.assign(static_cast<size_t>(n) * n, 0.0);
  m.combined.assign(static_cast<size_t>(n) * n, 0.0);

  // enumerate unordered pairs once; pair t -> (i, j) with i < j
  const int64_t n_pairs = static_cast<int64_t>(n) * (n - 1) / 2;
  std::vector<std::pair<int, int>> pairs;
  pairs.reserve(n_pairs);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) pairs.emplace_back(i, j);

  parallel_for(static_cast<int>(n_pairs), jobs, [&](int t) {
    auto [i, j] = pairs[t];
    PairDistance d = pair_distance(srvfs[i], srvfs[j], g);
    size_t ij = static_cast<size_t>(i) * n + j;
    size_t ji = static_cast<size_t>(j) * n + i;
    m.amplitude[ij] = m.amplitude[ji] = d.amplitude;
    m.phase[ij] = m.phase[ji] = d.phase;
  });

  for (size_t k = 0; k < m.combined.size(); ++k)
    m.combined[k] = delta * m.amplitude[k] + (1.0 - delta) * m.phase[k];
  return m;
}

DistanceMatrix distance_matrix(const CurveDataset& dataset, double delta, int jobs) {
  return distance_matrix(dataset_srvfs(dataset), dataset.grid, delta, jobs);
}

namespace {
constexpr char kMagic[4] = {'F', 'D', 'S', 'M'};
constexpr uint32_t kFormatVersion = 1;

template <class T>
void write_raw(std::ostream& os, const T& v) {
  os.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <class T>
void read_raw(std::istream& is, T& v) {
  is.read(reinterpret_cast<char*>(&v), sizeof(T));
}
}  // namespace

void save_distance_matrix(const DistanceMatrix& m, const std::filesystem::path& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw validation_error("cannot open for writing: " + path.string());
  os.write(kMagic, 4);
  write_raw(os, kFormatVersion);
  write_raw(os, static_cast<uint32_t>(m.n));
  write_raw(os, m.delta);
  auto write_block = [&](const std::vector<double>& b) {
    os.write(reinterpret_cast<const char*>(b.data()),
             static_cast<std::streamsize>(b.size() * sizeof(double)));
  };
  write_block(m.amplitude);
  write_block(m.phase);
  write_block(m.combined);
  if (!os) throw validation_error("write failed: " + path.string());
}

DistanceMatrix load_distance_matrix(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw validation_error("cannot open distance matrix file: " + path.string());
  char magic[4];
  is.read(magic, 4);
  if (!is || std::memcmp(magic, kMagic, 4) != 0)
    throw validation_error("not a distance matrix file (bad magic): " + path.string());
  uint32_t version = 0, n = 0;
  read_raw(is, version);
  if (version != kFormatVersion)
    throw validation_error("unsupported distance matrix format version " +
                           std::to_string(version));
  read_raw(is, n);
  DistanceMatrix m;
  m.n = static_cast<int>(n);
  read_raw(is, m.delta);
  size_t cells = static_cast<size_t>(n) * n;
  auto read_block = [&](std::vector<double>& b) {
    b.resize(cells);
    is.read(reinterpret_cast<char*>(b.data()),
            static_cast<std::streamsize>(cells * sizeof(double)));
  };
  read_block(m.amplitude);
  read_block(m.phase);
  read_block(m.combined);
  if (!is) throw validation_error("truncated distance matrix file: " + path.string());
  return m;
}

}  // namespace fdasynth
