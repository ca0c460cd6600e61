// Timing comparison of the quadrature paths: literal (eta, xi) reference loop
// vs the binned kernel, serial and OpenMP.  Prints one table row per case.

#include <chrono>
#include <cstdio>

#include "thetaforge/gram.hpp"
#include "thetaforge/parallel.hpp"

using namespace thetaforge;

namespace {

double time_of(const std::function<GramReport()>& f, GramReport& out) {
    auto t0 = std::chrono::steady_clock::now();
    out = f();
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

void row(const char* name, int N, double ref, double serial, double omp, double agree) {
    std::printf("%-28s N=%-3d reference %8.3fs   kernel(1T) %8.3fs   kernel(%dT) %8.3fs   "
                "speedup %5.1fx / %5.1fx   max|diff| %.2e\n",
                name, N, ref, serial, par::threads(), omp, ref / serial, ref / omp, agree);
}

}  // namespace

int main() {
    std::printf("quadrature paths: literal 2l-dim grid loop vs eta-collapsed kernel\n");
    std::printf("threads available: %d (OpenMP %s)\n\n", par::threads(),
                par::openmp_enabled() ? "on" : "off");

    {
        const cplx I(0.0, 1.0);
        Eigen::MatrixXcd om(1, 1);
        om(0, 0) = cplx(0.2, 0.8);
        PolarizedTorus torus(1, om, {2}, 3);
        auto labels = all_labels(torus);
        const int N = 96;
        GramReport ref, ser, par_rep;
        double t_ref = time_of([&] { return abelian_gram_reference(torus, labels, N); }, ref);
        par::set_threads(1);
        double t_ser = time_of([&] { return abelian_gram(torus, labels, N); }, ser);
        par::set_threads(0);
        double t_par = time_of([&] { return abelian_gram(torus, labels, N); }, par_rep);
        double agree = (ref.matrix - par_rep.matrix).cwiseAbs().maxCoeff();
        row("abelian l=1 delta=2 k=3", N, t_ref, t_ser, t_par, agree);
    }

    {
        RootSystem r3(3);
        EllipticModulus tau(cplx(0.1, 0.9));
        const int N = 16;
        GramReport ref, ser, par_rep;
        double t_ref = time_of([&] { return nonabelian_gram_reference(r3, 1, tau, N); }, ref);
        par::set_threads(1);
        double t_ser = time_of([&] { return nonabelian_gram(r3, 1, tau, N); }, ser);
        par::set_threads(0);
        double t_par = time_of([&] { return nonabelian_gram(r3, 1, tau, N); }, par_rep);
        double agree = (ref.matrix - par_rep.matrix).cwiseAbs().maxCoeff();
        row("nonabelian n=3 k=1", N, t_ref, t_ser, t_par, agree);
    }

    {
        RootSystem r4(4);
        EllipticModulus tau(cplx(0.0, 1.0));
        const int N = 6;
        GramReport ref, ser, par_rep;
        double t_ref = time_of([&] { return nonabelian_gram_reference(r4, 1, tau, N); }, ref);
        par::set_threads(1);
        double t_ser = time_of([&] { return nonabelian_gram(r4, 1, tau, N); }, ser);
        par::set_threads(0);
        double t_par = time_of([&] { return nonabelian_gram(r4, 1, tau, N); }, par_rep);
        double agree = (ref.matrix - par_rep.matrix).cwiseAbs().maxCoeff();
        row("nonabelian n=4 k=1", N, t_ref, t_ser, t_par, agree);
    }

    return 0;
}
