#include "liftdual/face_vectors.hpp"

#include <algorithm>

namespace liftdual {

Lifting::Lifting(const GridSpec& g, const DomainMask& mask) : g_(g), mask_(mask) {
    const int n0 = g.n[0], n1 = g.n[1];
    xact_.assign(std::size_t(n0 + 1) * (n1 + 2), 0);
    for (int j = 0; j < n1; ++j)
        for (int i = 0; i <= n0; ++i)
            xact_[xpos(i, j)] = mask.xface_active(g, i, j) && !mask.xface_neumann(g, i, j);
    if (g.dim == 2) {
        yact_.assign(std::size_t(n0 + 2) * (n1 + 1), 0);
        for (int j = 0; j <= n1; ++j)
            for (int i = 0; i < n0; ++i)
                yact_[ypos(i, j)] = mask.yface_active(g, i, j) && !mask.yface_neumann(g, i, j);
    }
    tact_.assign(std::size_t(n0 + 2) * (n1 + 2), 0);
    for (int j = 0; j < n1; ++j)
        for (int i = 0; i < n0; ++i) tact_[tpos(i, j)] = mask.inside[g.col(i, j)];
}

FaceVectorField Lifting::zeros() const {
    FaceVectorField f;
    const int D = components();
    for (int a = 0; a < D; ++a) {
        f.x[a].assign(xact_.size() * xlayers(), 0.0);
        f.t[a].assign(tact_.size() * tlevels(), 0.0);
        if (g_.dim == 2) f.y[a].assign(yact_.size() * xlayers(), 0.0);
    }
    return f;
}

void Lifting::expand(const FluxField& g, FaceVectorField& q) const {
    check_shape(g_, g);
    if (q.x[0].size() != xact_.size() * xlayers()) q = zeros();
    const int n0 = g_.n[0], n1 = g_.n[1], nt = g_.nt, dim = g_.dim;
    const std::size_t L = xlayers(), Lt = tlevels();

    gx_.assign(xact_.size() * L, 0.0);
    gt_.assign(tact_.size() * Lt, 0.0);
    if (dim == 2) gy_.assign(yact_.size() * L, 0.0);
    for (int j = 0; j < n1; ++j)
        for (int i = 0; i <= n0; ++i) {
            std::size_t p = xpos(i, j);
            if (!xact_[p]) continue;
            const double* src = g.sx.data() + std::size_t(g_.xface(i, j)) * nt;
            std::copy(src, src + nt, gx_.data() + p * L + 1);
        }
    if (dim == 2)
        for (int j = 0; j <= n1; ++j)
            for (int i = 0; i < n0; ++i) {
                std::size_t p = ypos(i, j);
                if (!yact_[p]) continue;
                const double* src = g.sy.data() + std::size_t(g_.yface(i, j)) * nt;
                std::copy(src, src + nt, gy_.data() + p * L + 1);
            }
    for (int j = 0; j < n1; ++j)
        for (int i = 0; i < n0; ++i) {
            std::size_t p = tpos(i, j);
            if (!tact_[p]) continue;
            const double* src = g.st.data() + std::size_t(g_.col(i, j)) * (nt + 1);
            std::copy(src, src + nt + 1, gt_.data() + p * Lt + 1);
        }

    const double* GX = gx_.data();
    const double* GY = gy_.data();
    const double* GT = gt_.data();
    for (int j = 0; j < n1; ++j)
        for (int i = 0; i <= n0; ++i) {
            std::size_t p = xpos(i, j);
            if (!xact_[p]) continue;
            const double* gxo = GX + p * L;
            const double* tl = GT + tpos(i - 1, j) * Lt;
            const double* tr = GT + tpos(i, j) * Lt;
            double* qx = q.x[0].data() + p * L;
            double* qt = q.x[dim].data() + p * L;
            for (std::size_t l = 0; l < L; ++l) {
                qx[l] = gxo[l];
                qt[l] = 0.25 * (tl[l] + tl[l + 1] + tr[l] + tr[l + 1]);
            }
            if (dim == 2) {
                const double* a = GY + ypos(i - 1, j) * L;
                const double* b = GY + ypos(i - 1, j + 1) * L;
                const double* c = GY + ypos(i, j) * L;
                const double* d = GY + ypos(i, j + 1) * L;
                double* qy = q.x[1].data() + p * L;
                for (std::size_t l = 0; l < L; ++l) qy[l] = 0.25 * (a[l] + b[l] + c[l] + d[l]);
            }
        }
    if (dim == 2)
        for (int j = 0; j <= n1; ++j)
            for (int i = 0; i < n0; ++i) {
                std::size_t p = ypos(i, j);
                if (!yact_[p]) continue;
                const double* gyo = GY + p * L;
                const double* a = GX + xpos(i, j - 1) * L;
                const double* b = GX + xpos(i + 1, j - 1) * L;
                const double* c = GX + xpos(i, j) * L;
                const double* d = GX + xpos(i + 1, j) * L;
                const double* tl = GT + tpos(i, j - 1) * Lt;
                const double* tr = GT + tpos(i, j) * Lt;
                double* q0 = q.y[0].data() + p * L;
                double* q1 = q.y[1].data() + p * L;
                double* q2 = q.y[2].data() + p * L;
                for (std::size_t l = 0; l < L; ++l) {
                    q1[l] = gyo[l];
                    q0[l] = 0.25 * (a[l] + b[l] + c[l] + d[l]);
                    q2[l] = 0.25 * (tl[l] + tl[l + 1] + tr[l] + tr[l + 1]);
                }
            }
    for (int j = 0; j < n1; ++j)
        for (int i = 0; i < n0; ++i) {
            std::size_t p = tpos(i, j);
            if (!tact_[p]) continue;
            const double* gto = GT + p * Lt;
            const double* xl = GX + xpos(i, j) * L;
            const double* xr = GX + xpos(i + 1, j) * L;
            double* qt = q.t[dim].data() + p * Lt;
            double* qx = q.t[0].data() + p * Lt;
            // level index m = kk + 1 for kk in [0, nt]; neighbouring spatial layers l = kk, kk+1
            for (int m = 1; m <= nt + 1; ++m) {
                qt[m] = gto[m];
                qx[m] = 0.25 * (xl[m - 1] + xl[m] + xr[m - 1] + xr[m]);
            }
            if (dim == 2) {
                const double* yb = GY + ypos(i, j) * L;
                const double* ya = GY + ypos(i, j + 1) * L;
                double* qy = q.t[1].data() + p * Lt;
                for (int m = 1; m <= nt + 1; ++m) qy[m] = 0.25 * (yb[m - 1] + yb[m] + ya[m - 1] + ya[m]);
            }
        }
}

void Lifting::contract(const FaceVectorField& s, FluxField& out) const {
    if (out.sx.size() != std::size_t(g_.n_xfaces()) * g_.nt) out = FluxField(g_);
    const int n0 = g_.n[0], n1 = g_.n[1], nt = g_.nt, dim = g_.dim;
    const std::size_t L = xlayers(), Lt = tlevels();

    gx_.assign(xact_.size() * L, 0.0);
    gt_.assign(tact_.size() * Lt, 0.0);
    if (dim == 2) gy_.assign(yact_.size() * L, 0.0);
    double* GX = gx_.data();
    double* GY = gy_.data();
    double* GT = gt_.data();

    for (int j = 0; j < n1; ++j)
        for (int i = 0; i <= n0; ++i) {
            std::size_t p = xpos(i, j);
            if (!xact_[p]) continue;
            double* gxo = GX + p * L;
            double* tl = GT + tpos(i - 1, j) * Lt;
            double* tr = GT + tpos(i, j) * Lt;
            const double* sx = s.x[0].data() + p * L;
            const double* st = s.x[dim].data() + p * L;
            for (std::size_t l = 0; l < L; ++l) {
                gxo[l] += sx[l];
                double w = 0.25 * st[l];
                tl[l] += w;
                tl[l + 1] += w;
                tr[l] += w;
                tr[l + 1] += w;
            }
            if (dim == 2) {
                double* a = GY + ypos(i - 1, j) * L;
                double* b = GY + ypos(i - 1, j + 1) * L;
                double* c = GY + ypos(i, j) * L;
                double* d = GY + ypos(i, j + 1) * L;
                const double* sy = s.x[1].data() + p * L;
                for (std::size_t l = 0; l < L; ++l) {
                    double w = 0.25 * sy[l];
                    a[l] += w;
                    b[l] += w;
                    c[l] += w;
                    d[l] += w;
                }
            }
        }
    if (dim == 2)
        for (int j = 0; j <= n1; ++j)
            for (int i = 0; i < n0; ++i) {
                std::size_t p = ypos(i, j);
                if (!yact_[p]) continue;
                double* gyo = GY + p * L;
                double* a = GX + xpos(i, j - 1) * L;
                double* b = GX + xpos(i + 1, j - 1) * L;
                double* c = GX + xpos(i, j) * L;
                double* d = GX + xpos(i + 1, j) * L;
                double* tl = GT + tpos(i, j - 1) * Lt;
                double* tr = GT + tpos(i, j) * Lt;
                const double* s0 = s.y[0].data() + p * L;
                const double* s1 = s.y[1].data() + p * L;
                const double* s2 = s.y[2].data() + p * L;
                for (std::size_t l = 0; l < L; ++l) {
                    gyo[l] += s1[l];
                    double w = 0.25 * s0[l];
                    a[l] += w;
                    b[l] += w;
                    c[l] += w;
                    d[l] += w;
                    double u = 0.25 * s2[l];
                    tl[l] += u;
                    tl[l + 1] += u;
                    tr[l] += u;
                    tr[l + 1] += u;
                }
            }
    for (int j = 0; j < n1; ++j)
        for (int i = 0; i < n0; ++i) {
            std::size_t p = tpos(i, j);
            if (!tact_[p]) continue;
            double* gto = GT + p * Lt;
            double* xl = GX + xpos(i, j) * L;
            double* xr = GX + xpos(i + 1, j) * L;
            const double* st = s.t[dim].data() + p * Lt;
            const double* sx = s.t[0].data() + p * Lt;
            for (int m = 1; m <= nt + 1; ++m) {
                gto[m] += st[m];
                double w = 0.25 * sx[m];
                xl[m - 1] += w;
                xl[m] += w;
                xr[m - 1] += w;
                xr[m] += w;
            }
            if (dim == 2) {
                double* yb = GY + ypos(i, j) * L;
                double* ya = GY + ypos(i, j + 1) * L;
                const double* sy = s.t[1].data() + p * Lt;
                for (int m = 1; m <= nt + 1; ++m) {
                    double w = 0.25 * sy[m];
                    yb[m - 1] += w;
                    yb[m] += w;
                    ya[m - 1] += w;
                    ya[m] += w;
                }
            }
        }

    const double scale = 1.0 / components();
    std::fill(out.sx.begin(), out.sx.end(), 0.0);
    std::fill(out.sy.begin(), out.sy.end(), 0.0);
    std::fill(out.st.begin(), out.st.end(), 0.0);
    for (int j = 0; j < n1; ++j)
        for (int i = 0; i <= n0; ++i) {
            std::size_t p = xpos(i, j);
            if (!xact_[p]) continue;
            double* o = out.sx.data() + std::size_t(g_.xface(i, j)) * nt;
            for (int k = 0; k < nt; ++k) o[k] = scale * GX[p * L + k + 1];
        }
    if (dim == 2)
        for (int j = 0; j <= n1; ++j)
            for (int i = 0; i < n0; ++i) {
                std::size_t p = ypos(i, j);
                if (!yact_[p]) continue;
                double* o = out.sy.data() + std::size_t(g_.yface(i, j)) * nt;
                for (int k = 0; k < nt; ++k) o[k] = scale * GY[p * L + k + 1];
            }
    for (int j = 0; j < n1; ++j)
        for (int i = 0; i < n0; ++i) {
            std::size_t p = tpos(i, j);
            if (!tact_[p]) continue;
            double* o = out.st.data() + std::size_t(g_.col(i, j)) * (nt + 1);
            for (int kk = 0; kk <= nt; ++kk) o[kk] = scale * GT[p * Lt + kk + 1];
        }
}

double Lifting::inner(const FaceVectorField& a, const FaceVectorField& b) const {
    double s = 0.0;
    auto dot = [&](const std::vector<double>& u, const std::vector<double>& v) {
        for (std::size_t k = 0; k < u.size(); ++k) s += u[k] * v[k];
    };
    for (int c = 0; c < components(); ++c) {
        dot(a.x[c], b.x[c]);
        dot(a.t[c], b.t[c]);
        if (g_.dim == 2) dot(a.y[c], b.y[c]);
    }
    return s * face_weight();
}

}  // namespace liftdual
