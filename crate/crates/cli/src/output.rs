use serde_json::{json, Value};
use wickforge::linalg::{Complex64, Vector};
use wickforge::{Matrix, StatisticsSystem};

fn real_if_exact(z: Complex64) -> Option<f64> {
    (z.im == 0.0).then_some(z.re)
}

fn scalar_text(z: Complex64) -> String {
    match real_if_exact(z) {
        Some(re) => format!("{re}"),
        None => format!("({},{})", z.re, z.im),
    }
}

/// `[[a, b], [c, d]]`, with `(re,im)` for entries that are not real.
pub fn matrix_text(m: &Matrix) -> String {
    let rows: Vec<String> = m
        .row_iter()
        .map(|r| {
            let cells: Vec<String> = r.iter().map(|z| scalar_text(*z)).collect();
            format!("[{}]", cells.join(", "))
        })
        .collect();
    format!("[{}]", rows.join(", "))
}

pub fn vector_text(v: &Vector) -> String {
    let cells: Vec<String> = v.iter().map(|z| scalar_text(*z)).collect();
    format!("[{}]", cells.join(", "))
}

pub fn reals_text(xs: &[f64]) -> String {
    let cells: Vec<String> = xs.iter().map(|x| format!("{x:.6e}")).collect();
    format!("[{}]", cells.join(", "))
}

pub fn complex_json(z: Complex64) -> Value {
    json!([z.re, z.im])
}

/// Rows of `[re, im]` pairs.
pub fn matrix_json(m: &Matrix) -> Value {
    Value::Array(
        m.row_iter()
            .map(|r| Value::Array(r.iter().map(|z| complex_json(*z)).collect()))
            .collect(),
    )
}

pub fn vector_json(v: &Vector) -> Value {
    Value::Array(v.iter().map(|z| complex_json(*z)).collect())
}

pub fn system_json(system: &StatisticsSystem) -> Value {
    json!({
        "label": system.label,
        "dim": system.dim(),
        "has_braid": system.braid.is_some(),
        "key": system.content_key().to_string(),
    })
}

pub fn print_json(value: &Value) {
    println!("{}", serde_json::to_string_pretty(value).expect("JSON values serialize"));
}

#[cfg(test)]
mod tests {
    use super::*;
    use wickforge::linalg::c64;

    #[test]
    fn matrices_print_compactly() {
        let m = Matrix::from_row_slice(2, 2, &[c64(2.625, 0.0), c64(0.0, 0.0), c64(0.0, 1.0), c64(-1.0, 0.0)]);
        assert_eq!(matrix_text(&m), "[[2.625, 0], [(0,1), -1]]");
        assert_eq!(matrix_text(&Matrix::from_element(1, 1, c64(2.625, 0.0))), "[[2.625]]");
    }
}
