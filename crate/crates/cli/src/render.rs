use serde_json::{json, Value};

use quadrat::construct::AnyQuadratization;
use quadrat::quadsys::generator_name;
use quadrat::{Field, Quadratization};

/// `{order, vars, rhs, rhs_terms}`; `rhs_terms[k]` lists the products in
/// `rhs[k]` as `{factors: [a, b], coeff}`.
pub fn quadratization<F: Field>(q: &Quadratization<F>) -> Value {
    let terms: Vec<Value> = q
        .rhs()
        .iter()
        .map(|e| {
            e.terms()
                .map(|((i, j), c)| json!({ "factors": [generator_name(i), generator_name(j)], "coeff": c.render() }))
                .collect()
        })
        .collect();
    json!({
        "order": q.order(),
        "vars": q.new_vars().vars().iter().map(|v| v.to_string()).collect::<Vec<_>>(),
        "rhs": q.rhs().iter().map(|e| e.to_string()).collect::<Vec<_>>(),
        "rhs_terms": terms,
    })
}

pub fn any_quadratization(q: &AnyQuadratization) -> Value {
    match q {
        AnyQuadratization::Exact(q) => quadratization(q),
        AnyQuadratization::Float(q) => quadratization(q),
    }
}
