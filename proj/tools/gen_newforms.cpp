// Regenerates the q-expansion files under data/newforms.
//
//   gen_newforms <output-dir> [precision]

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include "svp/forms_catalog.hpp"
#include "svp/modular_forms.hpp"

namespace {

using svp::qexp::QSeries;

// (N E_2(N tau) - E_2(tau)) / (N - 1), holomorphic of weight 2 on Gamma_0(N).
QSeries eisenstein_level(std::int64_t N, std::int64_t T) {
    const QSeries e2 = svp::qexp::eisenstein(2, T);
    return (e2.dilate(N).truncate(T) * mpq_class(N) - e2) * mpq_class(1, N - 1);
}

// Theta series of x^2 + xy + 2y^2, weight 1 with character (-7 / .).
QSeries theta_disc7(std::int64_t T) {
    std::vector<mpq_class> c(static_cast<std::size_t>(T + 1), 0);
    const auto ymax = static_cast<std::int64_t>(std::sqrt(4.0 * T / 7.0)) + 1;
    const auto xmax = static_cast<std::int64_t>(std::sqrt(static_cast<double>(T))) + ymax + 1;
    for (std::int64_t y = -ymax; y <= ymax; ++y) {
        for (std::int64_t x = -xmax; x <= xmax; ++x) {
            const std::int64_t n = x * x + x * y + 2 * y * y;
            if (n <= T) c[static_cast<std::size_t>(n)] += 1;
        }
    }
    return QSeries::from_coefficients(0, std::move(c), T);
}

void write(const std::filesystem::path& dir, const std::string& name, const QSeries& f, const std::string& header) {
    std::ofstream out(dir / name);
    if (!out) throw std::runtime_error("cannot write " + (dir / name).string());
    out << svp::catalog::format_qexp(f, header);
    std::cout << "wrote " << (dir / name).string() << '\n';
}

}  // namespace

int main(int argc, char** argv) {
    if (argc < 2 || argc > 3) {
        std::cerr << "usage: gen_newforms <output-dir> [precision]\n";
        return 2;
    }
    try {
        const std::filesystem::path dir = argv[1];
        const std::int64_t T = argc == 3 ? std::stoll(argv[2]) : 400;
        std::filesystem::create_directories(dir);
        using svp::qexp::eta_quotient;
        write(dir, "2_10.qexp", eta_quotient({{1, 8}, {2, 8}}, T) * eisenstein_level(2, T),
              "level 2, weight 10\neta(tau)^8 eta(2 tau)^8 (2 E_2(2 tau) - E_2(tau))");
        write(dir, "3_8.qexp", eta_quotient({{1, 6}, {3, 6}}, T) * eisenstein_level(3, T),
              "level 3, weight 8\neta(tau)^6 eta(3 tau)^6 (3 E_2(3 tau) - E_2(tau)) / 2");
        write(dir, "5_6.qexp", eta_quotient({{1, 4}, {5, 4}}, T) * eisenstein_level(5, T),
              "level 5, weight 6\neta(tau)^4 eta(5 tau)^4 (5 E_2(5 tau) - E_2(tau)) / 4");
        write(dir, "7_4.qexp", eta_quotient({{1, 3}, {7, 3}}, T) * theta_disc7(T),
              "level 7, weight 4\neta(tau)^3 eta(7 tau)^3 times the theta series of x^2 + xy + 2y^2");
        for (std::int64_t N : {17, 19, 21, 49}) {
            const auto e = svp::catalog::curve_model(N);
            write(dir, std::to_string(N) + "_2.qexp", svp::catalog::curve_qexp(e, T),
                  "level " + std::to_string(N) + ", weight 2\nL-series of the curve [" + std::to_string(e.a1) + "," +
                      std::to_string(e.a2) + "," + std::to_string(e.a3) + "," + std::to_string(e.a4) + "," +
                      std::to_string(e.a6) + "] from point counts");
        }
    } catch (const std::exception& e) {
        std::cerr << "gen_newforms: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
