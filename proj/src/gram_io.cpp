#include <fstream>

#include "binary_io.hpp"
#include "lptk/error.hpp"
#include "lptk/kernels.hpp"

namespace lptk {

namespace {
constexpr char kMagic[8] = {'L', 'P', 'T', 'K', 'G', 'R', 'A', 'M'};
constexpr std::uint32_t kVersion = 1;
} // namespace

void write_gram(const GramTensor& gram, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw FormatError("cannot open " + path.string() + " for writing");
    out.write(kMagic, sizeof kMagic);
    detail::put_u32(out, kVersion);
    detail::put_u64(out, static_cast<std::uint64_t>(gram.n()));
    detail::put_u32(out, static_cast<std::uint32_t>(gram.kernel().kind));
    detail::put_u32(out, static_cast<std::uint32_t>(gram.kernel().degree));
    detail::put_f64s(out, gram.matricized());
    if (!out) throw FormatError("failed writing " + path.string());
}

GramTensor read_gram(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw FormatError("cannot open " + path.string());
    char magic[8];
    detail::get_exact(in, magic, sizeof magic, "magic");
    if (!std::equal(std::begin(magic), std::end(magic), std::begin(kMagic))) {
        throw FormatError(path.string() + " is not a Gram tensor file");
    }
    const auto version = detail::get_u32(in, "version");
    if (version != kVersion) throw FormatError("unsupported Gram file version");
    const auto n = detail::get_u64(in, "n");
    const auto kind = detail::get_u32(in, "kernel kind");
    const auto degree = detail::get_u32(in, "degree");
    if (kind > static_cast<std::uint32_t>(KernelKind::exponential)) {
        throw FormatError("unknown kernel kind in Gram file");
    }
    if (n == 0 || n > 4096) throw FormatError("implausible sample count in Gram file");

    TensorKernelSpec spec{static_cast<KernelKind>(kind), static_cast<int>(degree), 4};
    std::vector<double> data(n * n * n * n);
    detail::get_f64s(in, data, "Gram entries");
    return GramTensor(static_cast<Eigen::Index>(n), spec, std::move(data));
}

} // namespace lptk
