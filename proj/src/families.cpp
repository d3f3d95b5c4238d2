#include "fqm/families.hpp"

#include <algorithm>
#include <set>
#include <string>
#include <utility>

namespace fqm {

namespace {

using NamedCols = std::vector<std::pair<std::string, std::vector<Code>>>;

std::vector<Code> unit(int rows, int i) {
    std::vector<Code> v(static_cast<std::size_t>(rows), 0);
    v[static_cast<std::size_t>(i)] = 1;
    return v;
}

std::vector<Code> ones(int rows) {
    return std::vector<Code>(static_cast<std::size_t>(rows), 1);
}

std::vector<Code> at_rows(int rows, std::initializer_list<int> idx) {
    std::vector<Code> v(static_cast<std::size_t>(rows), 0);
    for (int i : idx) v[static_cast<std::size_t>(i)] = 1;
    return v;
}

void require(bool ok, const std::string& msg) {
    if (!ok) throw PreconditionError(msg);
}

void push_units(NamedCols& cols, int r) {
    for (int i = 0; i < r; ++i) cols.emplace_back("b" + std::to_string(i + 1), unit(r, i));
}

LinearMatroid three_point_line(int i) {
    const FieldSpec F = make_field(2);
    NamedCols cols;
    cols.emplace_back("b", std::vector<Code>{1, 0});
    cols.emplace_back("x" + std::to_string(i), std::vector<Code>{0, 1});
    cols.emplace_back("y" + std::to_string(i), std::vector<Code>{1, 1});
    return LinearMatroid(FqMatrix::from_columns(F, 2, cols));
}

}  // namespace

BuiltFamily build_figure(Family which, int r) {
    const FieldSpec F = make_field(2);
    NamedCols cols;
    std::vector<std::string> series;
    switch (which) {
        case Family::Lr: {
            require(r >= 4, "Lr is defined for rank >= 4");
            push_units(cols, r);
            cols.emplace_back("e", ones(r));
            cols.emplace_back("c2", at_rows(r, {0, 1}));
            cols.emplace_back("c3", at_rows(r, {0, 2}));
            cols.emplace_back("c4", at_rows(r, {1, 2}));
            series.push_back("e");
            for (int i = 4; i <= r; ++i) series.push_back("b" + std::to_string(i));
            break;
        }
        case Family::Jr: {
            require(r >= 4, "Jr is defined for rank >= 4");
            push_units(cols, r);
            std::vector<Code> e = ones(r);
            e[0] = 0;
            cols.emplace_back("e", std::move(e));
            cols.emplace_back("c2", at_rows(r, {0, 1, 2}));
            cols.emplace_back("c3", at_rows(r, {0, 1, 3}));
            cols.emplace_back("c4", at_rows(r, {0, 2, 3}));
            series.push_back("e");
            for (int i = 5; i <= r; ++i) series.push_back("b" + std::to_string(i));
            break;
        }
        case Family::Mr: {
            require(r >= 3, "Mr is defined for rank >= 3");
            push_units(cols, r);
            cols.emplace_back("e", ones(r));
            for (int j = 1; j <= r - 1; ++j)
                cols.emplace_back("g" + std::to_string(j), at_rows(r, {0, j}));
            break;
        }
        case Family::Nr: {
            require(r >= 3, "Nr is defined for rank >= 3");
            push_units(cols, r);
            std::vector<Code> e = ones(r);
            e[0] = 0;
            cols.emplace_back("e", std::move(e));
            for (int j = 1; j <= r - 2; ++j)
                cols.emplace_back("g" + std::to_string(j), at_rows(r, {0, 1, j + 1}));
            break;
        }
        default:
            throw PreconditionError("family has no fixed per-rank matrix form");
    }
    return BuiltFamily{LinearMatroid(FqMatrix::from_columns(F, r, cols)), "e",
                       std::move(series)};
}

BuiltFamily build_structural(Family which, int r) {
    switch (which) {
        case Family::Pr: {
            require(r >= 2, "Pr is defined for rank >= 2");
            LinearMatroid acc = three_point_line(1);
            for (int i = 2; i <= r - 1; ++i)
                acc = parallel_connection(acc, "b", three_point_line(i), "b");
            return BuiltFamily{std::move(acc), "b", {}};
        }
        case Family::Mr: {
            require(r >= 3, "the structural Mr needs rank >= 3");
            // Below rank 3 the new point lands parallel to y1.
            BuiltFamily p = build_structural(Family::Pr, r);
            const FqMatrix& rep = p.matroid.rep();
            const FieldSpec& F = rep.field();
            std::vector<Code> z(static_cast<std::size_t>(rep.rows()), 0);
            auto add_col = [&](const std::string& l) {
                auto c = rep.col(rep.col_index(l));
                for (int i = 0; i < rep.rows(); ++i)
                    z[static_cast<std::size_t>(i)] =
                        F.add(z[static_cast<std::size_t>(i)], c[static_cast<std::size_t>(i)]);
            };
            add_col("b");
            for (int i = 1; i <= r - 1; ++i) add_col("x" + std::to_string(i));
            LinearMatroid m(rep.with_column("z", z));
            if (!m.is_simple())
                throw Error("structural Mr construction lost simplicity at rank " +
                            std::to_string(r));
            return BuiltFamily{std::move(m), "z", {}};
        }
        case Family::Nr: {
            require(r >= 4, "the structural Nr needs rank >= 4");
            BuiltFamily m = build_structural(Family::Mr, r - 1);
            const FqMatrix& rep = m.matroid.rep();
            const FieldSpec& F = rep.field();
            auto zc = rep.col(rep.col_index("z"));
            auto bc = rep.col(rep.col_index("b"));
            std::vector<Code> w(static_cast<std::size_t>(rep.rows()));
            for (int i = 0; i < rep.rows(); ++i)
                w[static_cast<std::size_t>(i)] =
                    F.add(zc[static_cast<std::size_t>(i)], bc[static_cast<std::size_t>(i)]);
            LinearMatroid n = LinearMatroid(rep.with_column("w", w)).dual();
            if (!n.is_simple())
                throw Error("structural Nr construction lost simplicity at rank " +
                            std::to_string(r));
            return BuiltFamily{std::move(n), "b", {}};
        }
        case Family::Lr: {
            require(r >= 4, "Lr is defined for rank >= 4");
            BuiltFamily fano = build_named(Family::Fano);
            std::vector<std::string> cls;
            LinearMatroid m =
                series_substitute(fano.matroid, fano.designated, r - 2, &cls);
            return BuiltFamily{std::move(m), fano.designated, std::move(cls)};
        }
        case Family::Jr: {
            require(r >= 4, "Jr is defined for rank >= 4");
            BuiltFamily ag = build_named(Family::AG32);
            std::vector<std::string> cls;
            LinearMatroid m = series_substitute(ag.matroid, ag.designated, r - 3, &cls);
            return BuiltFamily{std::move(m), ag.designated, std::move(cls)};
        }
        default:
            throw PreconditionError("family has no structural form");
    }
}

BuiltFamily build_named(Family which) {
    switch (which) {
        case Family::Fano: {
            const FieldSpec F = make_field(2);
            NamedCols cols;
            push_units(cols, 3);
            cols.emplace_back("g1", at_rows(3, {0, 1}));
            cols.emplace_back("g2", at_rows(3, {0, 2}));
            cols.emplace_back("g3", at_rows(3, {1, 2}));
            cols.emplace_back("g4", at_rows(3, {0, 1, 2}));
            return BuiltFamily{LinearMatroid(FqMatrix::from_columns(F, 3, cols)), "g4", {}};
        }
        case Family::AG32: {
            const FieldSpec F = make_field(2);
            NamedCols cols;
            cols.emplace_back("b1", at_rows(4, {0}));
            cols.emplace_back("b2", at_rows(4, {0, 1}));
            cols.emplace_back("b3", at_rows(4, {0, 2}));
            cols.emplace_back("b4", at_rows(4, {0, 3}));
            cols.emplace_back("g1", at_rows(4, {0, 1, 2}));
            cols.emplace_back("g2", at_rows(4, {0, 1, 3}));
            cols.emplace_back("g3", at_rows(4, {0, 2, 3}));
            cols.emplace_back("g4", at_rows(4, {0, 1, 2, 3}));
            return BuiltFamily{LinearMatroid(FqMatrix::from_columns(F, 4, cols)), "g4", {}};
        }
        case Family::Golay12: {
            const FieldSpec F = make_field(3);
            static const Code B[6][6] = {
                {0, 1, 1, 1, 1, 1}, {1, 0, 1, 2, 2, 1}, {1, 1, 0, 1, 2, 2},
                {1, 2, 1, 0, 1, 2}, {1, 2, 2, 1, 0, 1}, {1, 1, 2, 2, 1, 0}};
            NamedCols cols;
            push_units(cols, 6);
            for (int j = 0; j < 6; ++j) {
                std::vector<Code> c(6);
                for (int i = 0; i < 6; ++i) c[static_cast<std::size_t>(i)] = B[i][j];
                cols.emplace_back("g" + std::to_string(j + 1), std::move(c));
            }
            // The generator must span a self-dual code of minimum weight 6;
            // both are cheap to confirm outright.
            auto entry = [&](int i, int k) -> Code {
                return k < 6 ? (i == k ? Code{1} : Code{0}) : B[i][k - 6];
            };
            for (int i = 0; i < 6; ++i)
                for (int j = i; j < 6; ++j) {
                    Code s = 0;
                    for (int k = 0; k < 12; ++k)
                        s = F.add(s, F.mul(entry(i, k), entry(j, k)));
                    if (s != 0)
                        throw Error("code generator rows are not self-orthogonal");
                }
            int min_wt = 12;
            for (int msg = 1; msg < 729; ++msg) {
                int m = msg, wt = 0;
                Code d[6];
                for (int i = 0; i < 6; ++i) {
                    d[i] = static_cast<Code>(m % 3);
                    m /= 3;
                }
                for (int k = 0; k < 12; ++k) {
                    Code s = 0;
                    for (int i = 0; i < 6; ++i) s = F.add(s, F.mul(d[i], entry(i, k)));
                    if (s != 0) ++wt;
                }
                min_wt = std::min(min_wt, wt);
            }
            if (min_wt != 6)
                throw Error("code minimum weight is " + std::to_string(min_wt) +
                            ", expected 6");
            return BuiltFamily{LinearMatroid(FqMatrix::from_columns(F, 6, cols)), "", {}};
        }
        default:
            throw PreconditionError("family is rank-parameterized; no fixed instance");
    }
}

BuiltFamily build_uniform(int m, int n, int q) {
    const FieldSpec F = make_field(q);
    require(n >= 1 && m >= 0 && m <= n, "uniform matroid needs 0 <= m <= n, n >= 1");
    NamedCols cols;
    if (m == n) {
        push_units(cols, n);
        for (auto& c : cols) c.first[0] = 'u';
        return BuiltFamily{LinearMatroid(FqMatrix::from_columns(F, n, cols)), "", {}};
    }
    require(m >= 2, "U_{0,n} and U_{1,n} are not simple; refused");
    require(n <= q + 1,
            "U_{" + std::to_string(m) + "," + std::to_string(n) + "} needs n <= q+1 over GF(" +
                std::to_string(q) + ")");
    for (int j = 0; j < n; ++j) {
        std::vector<Code> c(static_cast<std::size_t>(m), 0);
        if (j < q) {
            for (int i = 0; i < m; ++i)
                c[static_cast<std::size_t>(i)] = F.pow(static_cast<Code>(j), i);
        } else {
            c[static_cast<std::size_t>(m - 1)] = 1;  // the point at infinity
        }
        cols.emplace_back("u" + std::to_string(j + 1), std::move(c));
    }
    return BuiltFamily{LinearMatroid(FqMatrix::from_columns(F, m, cols)), "", {}};
}

BuiltFamily build_circuit_uniform(int r, int q) {
    const FieldSpec F = make_field(q);
    require(r >= 1, "circuit needs rank >= 1");
    NamedCols cols;
    push_units(cols, r);
    cols.emplace_back("e", ones(r));
    return BuiltFamily{LinearMatroid(FqMatrix::from_columns(F, r, cols)), "e", {}};
}

LinearMatroid series_substitute(const LinearMatroid& m, const std::string& x, int class_size,
                                std::vector<std::string>* class_labels) {
    require(class_size >= 1, "series class needs at least one member");
    (void)m.rep().col_index(x);
    if (class_labels) class_labels->assign(1, x);
    if (class_size == 1) return m;

    LinearMatroid d = m.dual();
    FqMatrix rep = d.rep();
    const auto span = rep.col(rep.col_index(x));
    const std::vector<Code> xc(span.begin(), span.end());
    for (int k = 2; k <= class_size; ++k) {
        const std::string lbl = x + "#" + std::to_string(k);
        if (rep.has_label(lbl))
            throw PreconditionError("series label '" + lbl + "' is already taken");
        rep = rep.with_column(lbl, xc);
        if (class_labels) class_labels->push_back(lbl);
    }
    return LinearMatroid(std::move(rep)).dual();
}

LinearMatroid parallel_connection(const LinearMatroid& a, const std::string& ea,
                                  const LinearMatroid& b, const std::string& eb) {
    if (a.q() != b.q())
        throw PreconditionError("parallel connection requires a common field");
    const FqMatrix& am = a.rep();
    const FqMatrix& bm = b.rep();

    auto lead_basis = [](const FqMatrix& m, const std::string& e0) {
        const int j0 = m.col_index(e0);
        bool zero = true;
        for (int i = 0; i < m.rows(); ++i)
            if (m.at(i, j0) != 0) {
                zero = false;
                break;
            }
        if (zero) throw PreconditionError("basepoint '" + e0 + "' is a loop");
        GaussState g(m.field(), m.rows());
        std::vector<std::string> basis{e0};
        g.try_insert(m.col(j0));
        for (int j = 0; j < m.cols(); ++j) {
            if (j == j0) continue;
            if (g.try_insert(m.col(j))) basis.push_back(m.label(j));
        }
        return basis;
    };

    const StandardRep sa = standard_rep(am, lead_basis(am, ea));
    const StandardRep sb = standard_rep(bm, lead_basis(bm, eb));
    const int ra = sa.base.rows();
    const int rb = sb.base.rows();
    const int rows = ra + rb - 1;

    // Both basepoints sit at the first unit vector; the glued matrix shares
    // that axis and keeps the two row spaces otherwise disjoint.
    NamedCols cols;
    std::set<std::string> taken;
    for (const auto& label : am.labels()) {
        auto c = sa.base.col(sa.base.col_index(label));
        std::vector<Code> v(static_cast<std::size_t>(rows), 0);
        for (int i = 0; i < ra; ++i) v[static_cast<std::size_t>(i)] = c[static_cast<std::size_t>(i)];
        cols.emplace_back(label, std::move(v));
        taken.insert(label);
    }
    for (const auto& label : bm.labels()) {
        if (label == eb) continue;
        auto c = sb.base.col(sb.base.col_index(label));
        std::vector<Code> v(static_cast<std::size_t>(rows), 0);
        v[0] = c[0];
        for (int i = 1; i < rb; ++i) v[static_cast<std::size_t>(ra - 1 + i)] = c[static_cast<std::size_t>(i)];
        std::string l = label;
        while (!taken.insert(l).second) l += "'";
        cols.emplace_back(std::move(l), std::move(v));
    }
    return LinearMatroid(FqMatrix::from_columns(am.field(), rows, cols));
}

LinearMatroid two_sum(const LinearMatroid& a, const std::string& ea,
                      const LinearMatroid& b, const std::string& eb) {
    const auto& ca = a.coloops();
    const auto& cb = b.coloops();
    if (std::find(ca.begin(), ca.end(), ea) != ca.end() ||
        std::find(cb.begin(), cb.end(), eb) != cb.end())
        throw PreconditionError("2-sum requires non-coloop basepoints");
    return parallel_connection(a, ea, b, eb).deleted({ea});
}

}  // namespace fqm
