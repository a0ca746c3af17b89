#include <fslab/json_io.hpp>

namespace fslab
{

namespace
{

double clean(double v)
{
    return v == 0.0 ? 0.0 : v;
}

Json nested(const std::vector<cplx> &data, std::size_t n, int depth, std::size_t offset)
{
    Json out = Json::array();
    std::size_t stride = 1;
    for (int k = 1; k < depth; ++k) {
        stride *= n;
    }
    for (std::size_t i = 0; i < n; ++i) {
        if (depth == 1) {
            out.push_back(to_json(data[offset + i]));
        } else {
            out.push_back(nested(data, n, depth - 1, offset + i * stride));
        }
    }
    return out;
}

void flatten(const Json &j, std::size_t n, int depth, std::vector<cplx> &out)
{
    if (!j.is_array() || j.size() != n) {
        throw InvalidArgument("jet JSON: tensor has the wrong shape");
    }
    for (const auto &e : j) {
        if (depth == 1) {
            out.push_back(complex_from_json(e));
        } else {
            flatten(e, n, depth - 1, out);
        }
    }
}

} // namespace

Json to_json(cplx z)
{
    return Json::array({clean(z.real()), clean(z.imag())});
}

cplx complex_from_json(const Json &j)
{
    if (j.is_number()) {
        return {j.get<double>(), 0.0};
    }
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
        throw InvalidArgument("complex numbers must be written as [re, im]");
    }
    return {j[0].get<double>(), j[1].get<double>()};
}

Json to_json(const CVec &v)
{
    Json out = Json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        out.push_back(to_json(v(i)));
    }
    return out;
}

CVec vector_from_json(const Json &j)
{
    if (!j.is_array()) {
        throw InvalidArgument("vector JSON must be an array");
    }
    CVec v(static_cast<Eigen::Index>(j.size()));
    for (std::size_t i = 0; i < j.size(); ++i) {
        v(static_cast<Eigen::Index>(i)) = complex_from_json(j[i]);
    }
    return v;
}

Json to_json(const Jet3 &jet)
{
    const std::size_t n = jet.dim();
    Json l = Json::array();
    for (std::size_t i = 0; i < n; ++i) {
        Json row = Json::array();
        for (std::size_t k = 0; k < n; ++k) {
            row.push_back(to_json(jet.linear()(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k))));
        }
        l.push_back(row);
    }
    Json out;
    out["dim"] = n;
    out["L"] = l;
    out["T2"] = nested(jet.t2_data(), n, 3, 0);
    out["T3"] = nested(jet.t3_data(), n, 4, 0);
    return out;
}

Jet3 jet_from_json(const Json &j)
{
    if (!j.is_object() || !j.contains("dim") || !j.contains("L")) {
        throw InvalidArgument("jet JSON needs \"dim\" and \"L\"");
    }
    const auto n = j.at("dim").get<std::size_t>();
    if (n < 1) {
        throw InvalidArgument("jet JSON: dim must be >= 1");
    }
    std::vector<cplx> l;
    flatten(j.at("L"), n, 2, l);
    CMat lin(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t k = 0; k < n; ++k) {
            lin(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) = l[i * n + k];
        }
    }
    std::vector<cplx> t2;
    std::vector<cplx> t3;
    if (j.contains("T2")) {
        flatten(j.at("T2"), n, 3, t2);
    } else {
        t2.assign(n * n * n, 0.0);
    }
    if (j.contains("T3")) {
        flatten(j.at("T3"), n, 4, t3);
    } else {
        t3.assign(n * n * n * n, 0.0);
    }
    return Jet3(std::move(lin), std::move(t2), std::move(t3));
}

} // namespace fslab
