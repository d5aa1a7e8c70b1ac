#include <algorithm>
#include <fstream>

#include "binary_io.hpp"
#include "lptk/error.hpp"
#include "lptk/harness.hpp"

namespace lptk {

namespace {

constexpr char kMagic[8] = {'L', 'P', 'T', 'K', 'D', 'A', 'T', 'A'};
constexpr std::uint32_t kVersion = 1;
constexpr std::uint64_t kMaxEntries = std::uint64_t{1} << 31;

} // namespace

void write_dataset(const Dataset& data, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw FormatError("cannot open " + path.string() + " for writing");
    const auto& s = data.spec;
    out.write(kMagic, sizeof kMagic);
    detail::put_u32(out, kVersion);
    detail::put_u64(out, static_cast<std::uint64_t>(s.n));
    detail::put_u64(out, static_cast<std::uint64_t>(s.d));
    detail::put_u64(out, s.seed);
    detail::put_f64(out, s.sigma);
    detail::put_u64(out, static_cast<std::uint64_t>(s.k));
    detail::put_u32(out, static_cast<std::uint32_t>(s.feature_mode));
    detail::put_u64(out, static_cast<std::uint64_t>(data.w_star.size()));

    // X is stored row-major regardless of Eigen's storage order
    const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> rows = data.x;
    detail::put_f64s(out, std::span<const double>(rows.data(), static_cast<std::size_t>(rows.size())));
    detail::put_f64s(out, std::span<const double>(data.y.data(), static_cast<std::size_t>(data.y.size())));
    detail::put_f64s(out, std::span<const double>(data.w_star.data(),
                                                  static_cast<std::size_t>(data.w_star.size())));
    if (!out) throw FormatError("failed writing " + path.string());
}

Dataset read_dataset(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw FormatError("cannot open " + path.string());
    char magic[8];
    detail::get_exact(in, magic, sizeof magic, "magic");
    if (!std::equal(std::begin(magic), std::end(magic), std::begin(kMagic))) {
        throw FormatError(path.string() + " is not a dataset file");
    }
    if (detail::get_u32(in, "version") != kVersion) throw FormatError("unsupported dataset version");

    Dataset data;
    auto& s = data.spec;
    const auto n = detail::get_u64(in, "n");
    const auto d = detail::get_u64(in, "d");
    s.seed = detail::get_u64(in, "seed");
    s.sigma = detail::get_f64(in, "sigma");
    const auto k = detail::get_u64(in, "k");
    const auto mode = detail::get_u32(in, "feature mode");
    const auto wlen = detail::get_u64(in, "w* length");
    if (mode > static_cast<std::uint32_t>(FeatureMode::poly2)) throw FormatError("unknown feature mode");
    if (n == 0 || d == 0 || n > kMaxEntries / d || wlen > kMaxEntries) {
        throw FormatError("implausible dataset dimensions");
    }
    s.n = static_cast<Eigen::Index>(n);
    s.d = static_cast<Eigen::Index>(d);
    s.k = static_cast<Eigen::Index>(k);
    s.feature_mode = static_cast<FeatureMode>(mode);
    if (static_cast<std::uint64_t>(s.feature_count()) != wlen || k > wlen) {
        throw FormatError("w* length does not match the header");
    }

    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> rows(s.n, s.d);
    detail::get_f64s(in, std::span<double>(rows.data(), static_cast<std::size_t>(rows.size())), "X");
    data.x = rows;
    data.y.resize(s.n);
    detail::get_f64s(in, std::span<double>(data.y.data(), static_cast<std::size_t>(s.n)), "y");
    data.w_star.resize(static_cast<Eigen::Index>(wlen));
    detail::get_f64s(in, std::span<double>(data.w_star.data(), wlen), "w*");
    for (Eigen::Index j = 0; j < data.w_star.size(); ++j) {
        if (data.w_star[j] != 0.0) data.support.push_back(j);
    }
    return data;
}

} // namespace lptk
