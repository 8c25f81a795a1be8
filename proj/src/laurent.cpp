#include "verlinde/laurent.hpp"

#include <algorithm>

namespace verlinde {

namespace {

struct Entry {
    std::vector<long> e;
    int mask;
    Rat v;
};

}  // namespace

Series::Series(const SeriesContext* ctx) : ctx_(ctx) {
    const int n = ctx_->nvars();
    stride_.resize(n);
    long s = 1;
    for (int j = 0; j < n; ++j) {
        stride_[j] = s;
        s *= ctx_->win.span(j);
    }
    ncells_ = s;
    data_.assign(static_cast<std::size_t>(ncells_) * ctx_->jet_width(), Rat(0));
}

Series Series::one(const SeriesContext* ctx) { return constant(ctx, Rat(1)); }

Series Series::constant(const SeriesContext* ctx, const Rat& c) {
    Series s(ctx);
    std::vector<long> e(ctx->nvars(), 0);
    s.add_term(e, 0, c);
    return s;
}

long Series::cell_index(const std::vector<long>& e) const {
    long idx = 0;
    for (int j = 0; j < nvars(); ++j) {
        if (e[j] < ctx_->win.lo[j] || e[j] > ctx_->win.hi[j]) return -1;
        idx += (e[j] - ctx_->win.lo[j]) * stride_[j];
    }
    return idx;
}

void Series::decode(long idx, std::vector<long>& e) const {
    for (int j = nvars() - 1; j >= 0; --j) {
        e[j] = ctx_->win.lo[j] + idx / stride_[j];
        idx %= stride_[j];
    }
}

bool Series::in_window(const std::vector<long>& e) const { return cell_index(e) >= 0; }

void Series::add_term(const std::vector<long>& e, int mask, const Rat& c) {
    long idx = cell_index(e);
    if (idx < 0) {
        ++clipped_;
        return;
    }
    data_[static_cast<std::size_t>(idx) * ctx_->jet_width() + mask] += c;
}

Jet Series::coefficient(const std::vector<long>& e) const {
    Jet out(ctx_->m);
    long idx = cell_index(e);
    if (idx < 0) return out;
    const std::size_t base = static_cast<std::size_t>(idx) * ctx_->jet_width();
    for (int m = 0; m < ctx_->jet_width(); ++m) out.comp[m] = data_[base + m];
    return out;
}

bool Series::is_zero() const {
    for (const Rat& c : data_)
        if (c != 0) return false;
    return true;
}

void Series::negate() {
    for (Rat& c : data_)
        if (c != 0) c = -c;
}

void Series::scale(const Rat& s) {
    if (s == 0) {
        data_.assign(data_.size(), Rat(0));
        return;
    }
    for (Rat& c : data_)
        if (c != 0) c *= s;
}

void Series::scale_jet(const Jet& s) {
    const int jw = ctx_->jet_width();
    std::vector<Rat> cell(jw);
    for (long idx = 0; idx < ncells_; ++idx) {
        const std::size_t base = static_cast<std::size_t>(idx) * jw;
        bool any = false;
        for (int a = 0; a < jw; ++a)
            if (data_[base + a] != 0) {
                any = true;
                break;
            }
        if (!any) continue;
        for (int a = 0; a < jw; ++a) {
            cell[a] = data_[base + a];
            data_[base + a] = 0;
        }
        for (int a = 0; a < jw; ++a) {
            if (cell[a] == 0) continue;
            for (int b = 0; b < jw; ++b) {
                if ((a & b) || s.comp[b] == 0) continue;
                data_[base + (a | b)] += cell[a] * s.comp[b];
            }
        }
    }
}

void Series::add(const Series& o) {
    clipped_ += o.clipped_;
    for (std::size_t i = 0; i < data_.size(); ++i)
        if (o.data_[i] != 0) data_[i] += o.data_[i];
}

void Series::sub(const Series& o) {
    clipped_ += o.clipped_;
    for (std::size_t i = 0; i < data_.size(); ++i)
        if (o.data_[i] != 0) data_[i] -= o.data_[i];
}

void Series::add_constant(const Rat& c) {
    std::vector<long> e(nvars(), 0);
    add_term(e, 0, c);
}

Series Series::mul(const Series& o) const {
    const int jw = ctx_->jet_width();
    const int n = nvars();
    // Gather the sparser operand.
    auto gather = [&](const Series& s) {
        std::vector<Entry> out;
        std::vector<long> e(n);
        for (long idx = 0; idx < s.ncells_; ++idx) {
            const std::size_t base = static_cast<std::size_t>(idx) * jw;
            bool any = false;
            for (int a = 0; a < jw; ++a)
                if (s.data_[base + a] != 0) {
                    any = true;
                    break;
                }
            if (!any) continue;
            s.decode(idx, e);
            for (int a = 0; a < jw; ++a)
                if (s.data_[base + a] != 0) out.push_back(Entry{e, a, s.data_[base + a]});
        }
        return out;
    };
    std::vector<Entry> ea = gather(*this), eb = gather(o);
    if (ea.size() < eb.size()) std::swap(ea, eb);  // eb is the short side
    Series out(ctx_);
    out.clipped_ = clipped_ + o.clipped_;
    std::vector<long> t(n);
    for (const Entry& A : ea) {
        for (const Entry& B : eb) {
            if (A.mask & B.mask) continue;
            bool ok = true;
            for (int j = 0; j < n; ++j) {
                t[j] = A.e[j] + B.e[j];
                if (t[j] < ctx_->win.lo[j] || t[j] > ctx_->win.hi[j]) {
                    ok = false;
                    break;
                }
            }
            if (!ok) {
                ++out.clipped_;
                continue;
            }
            long idx = 0;
            for (int j = 0; j < n; ++j) idx += (t[j] - ctx_->win.lo[j]) * out.stride_[j];
            out.data_[static_cast<std::size_t>(idx) * jw + (A.mask | B.mask)] += A.v * B.v;
        }
    }
    return out;
}

Series Series::shifted(const std::vector<long>& d) const {
    const int jw = ctx_->jet_width();
    const int n = nvars();
    Series out(ctx_);
    out.clipped_ = clipped_;
    std::vector<long> e(n);
    for (long idx = 0; idx < ncells_; ++idx) {
        const std::size_t base = static_cast<std::size_t>(idx) * jw;
        bool any = false;
        for (int a = 0; a < jw; ++a)
            if (data_[base + a] != 0) {
                any = true;
                break;
            }
        if (!any) continue;
        decode(idx, e);
        bool ok = true;
        for (int j = 0; j < n; ++j) {
            e[j] += d[j];
            if (e[j] < ctx_->win.lo[j] || e[j] > ctx_->win.hi[j]) ok = false;
        }
        if (!ok) {
            ++out.clipped_;
            continue;
        }
        long nidx = 0;
        for (int j = 0; j < n; ++j) nidx += (e[j] - ctx_->win.lo[j]) * stride_[j];
        for (int a = 0; a < jw; ++a)
            if (data_[base + a] != 0) out.data_[static_cast<std::size_t>(nidx) * jw + a] = data_[base + a];
    }
    return out;
}

Series Series::pow(long p) const {
    if (p < 0) throw std::invalid_argument("Series::pow: negative exponent");
    Series acc = one(ctx_);
    Series b = *this;
    while (p) {
        if (p & 1) acc = acc.mul(b);
        p >>= 1;
        if (p) b = b.mul(b);
    }
    return acc;
}

Series Series::neumann_unit_inverse() const {
    // this = G with strictly dominated body support; returns sum (-G)^s.
    Series acc = one(ctx_);
    Series term = one(ctx_);
    Series negG = *this;
    negG.negate();
    const long guard = ncells_ + 8;
    for (long s = 0; s < guard; ++s) {
        term = term.mul(negG);
        if (term.is_zero()) return acc;
        acc.add(term);
    }
    throw InsufficientWindow("neumann inverse did not terminate within the window");
}

Series Series::inverse() const {
    const int jw = ctx_->jet_width();
    const int n = nvars();
    // Lead: revlex-minimal cell with nonzero body coefficient; linear cell
    // order is exactly the dominance order.
    long lead = -1;
    for (long idx = 0; idx < ncells_; ++idx)
        if (data_[static_cast<std::size_t>(idx) * jw] != 0) {
            lead = idx;
            break;
        }
    if (lead < 0) throw std::domain_error("Series::inverse: body is zero (not invertible)");
    std::vector<long> e0(n);
    decode(lead, e0);
    Jet c0 = coefficient(e0);
    std::vector<long> neg(n);
    for (int j = 0; j < n; ++j) neg[j] = -e0[j];
    Series A = shifted(neg);
    A.scale_jet(c0.inverse());
    // A = 1 + G0 + Gn: body G0 strictly dominated, Gn nilpotent.
    Series G0(ctx_), Gn(ctx_);
    for (long idx = 0; idx < A.ncells_; ++idx) {
        const std::size_t base = static_cast<std::size_t>(idx) * jw;
        if (A.data_[base] != 0) G0.data_[base] = A.data_[base];
        for (int a = 1; a < jw; ++a)
            if (A.data_[base + a] != 0) Gn.data_[base + a] = A.data_[base + a];
    }
    G0.add_constant(Rat(-1));
    Series inv0 = G0.neumann_unit_inverse();
    Series acc = inv0;
    if (!Gn.is_zero()) {
        Series term = inv0;
        for (int s = 1; s <= ctx_->m; ++s) {
            term = term.mul(Gn).mul(inv0);
            term.negate();
            if (term.is_zero()) break;
            acc.add(term);
        }
    }
    Series out = acc.shifted(neg);
    out.scale_jet(c0.inverse());
    out.clipped_ += clipped_;
    return out;
}

Series Series::exp_linear(const SeriesContext* ctx, const LinearFormY& f) {
    Series acc = one(ctx);
    for (int j = 0; j < ctx->nvars(); ++j) {
        if (static_cast<int>(f.coeff.size()) <= j || f.coeff[j] == 0) continue;
        Series uni(ctx);
        Rat c(1);
        for (long t = 0; t <= ctx->win.hi[j]; ++t) {
            std::vector<long> ej(ctx->nvars(), 0);
            ej[j] = t;
            uni.add_term(ej, 0, c);
            c *= f.coeff[j];
            c /= Rat(t + 1);
        }
        acc = acc.mul(uni);
    }
    return acc;
}

Series Series::mul_exp_nilpotent(const Series& nil) const {
    Series acc = *this;
    Series term = *this;
    Rat fact(1);
    for (int s = 1; s <= ctx_->m; ++s) {
        term = term.mul(nil);
        if (term.is_zero()) break;
        fact /= Rat(s);
        Series scaled = term;
        scaled.scale(fact);
        acc.add(scaled);
    }
    return acc;
}

Jet Series::residue() const {
    std::vector<long> e(nvars(), -1);
    return coefficient(e);
}

bool Series::equal_values(const Series& o) const { return data_ == o.data_; }

}  // namespace verlinde
