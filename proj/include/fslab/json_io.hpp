#ifndef FSLAB_JSON_IO_HPP
#define FSLAB_JSON_IO_HPP

#include <json.hpp>

#include <fslab/jet.hpp>

namespace fslab
{

using Json = nlohmann::ordered_json;

/// Complex numbers are written as [re, im]; -0.0 is written as 0.
Json to_json(cplx z);
cplx complex_from_json(const Json &j);
Json to_json(const CVec &v);
CVec vector_from_json(const Json &j);

/// {"dim": n, "L": [[..]], "T2": [[[..]]], "T3": [[[[..]]]]} with nested [re, im] entries.
Json to_json(const Jet3 &jet);
Jet3 jet_from_json(const Json &j);

} // namespace fslab

#endif
