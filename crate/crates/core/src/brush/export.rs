use std::fmt::Write;

use super::BrushEmbedding;
use crate::fmt::g12;
use crate::model::LogModel;

fn num(x: f64) -> String {
    if x.is_finite() {
        g12(x)
    } else {
        "null".into()
    }
}

fn string(s: &str) -> String {
    serde_json::to_string(s).expect("strings always serialise")
}

/// The model as a JSON object with its family and parameters.
pub fn model_to_json(model: &LogModel) -> String {
    match model {
        LogModel::Exp(m) => format!(
            "{{\"family\": \"exp\", \"lambda\": [{}, {}], \"Rf\": {}}}",
            num(m.lambda.re),
            num(m.lambda.im),
            num(m.r_f)
        ),
        LogModel::Sine(m) => {
            format!("{{\"family\": \"sine\", \"lambda\": [{}, 0], \"Rf\": {}}}", num(m.lambda), num(m.r_f))
        }
        LogModel::Composite(m) => {
            let stages: Vec<String> = m.stages().iter().map(model_to_json).collect();
            format!("{{\"family\": \"composite\", \"stages\": [{}]}}", stages.join(", "))
        }
    }
}

/// Serialises a brush: hairs in ordinate order, one per line, numbers with
/// twelve significant digits, LF line endings and a trailing newline.
pub fn brush_to_json(brush: &BrushEmbedding) -> String {
    brush_to_json_with(brush, None)
}

/// [`brush_to_json`] with the members of `extra`, a JSON object, appended
/// to the metadata.
pub fn brush_to_json_with(brush: &BrushEmbedding, extra: Option<&serde_json::Value>) -> String {
    let mut out = String::new();
    out.push_str("{\"model\": ");
    out.push_str(&model_to_json(&brush.model));
    out.push_str(", \"hairs\": [");
    for (i, h) in brush.hairs.iter().enumerate() {
        out.push_str(if i == 0 { "\n" } else { ",\n" });
        let samples: Vec<String> =
            h.samples.iter().map(|(t, z)| format!("[{}, {}, {}]", num(*t), num(z.re), num(z.im))).collect();
        let _ = write!(
            out,
            "{{\"address\": {}, \"ordinate\": {}, \"endpoint_t\": {}, \"samples\": [{}]}}",
            string(&h.address.to_string()),
            num(h.ordinate),
            num(h.endpoint_t),
            samples.join(", ")
        );
    }
    out.push_str("\n], \"metadata\": {");
    let failures: Vec<String> = brush
        .failures
        .iter()
        .map(|(a, e)| format!("[{}, {}]", string(&a.to_string()), string(&e.to_string())))
        .collect();
    let _ = write!(
        out,
        "\"family\": {}, \"hair_count\": {}, \"failures\": [{}]",
        string(&brush.family),
        brush.hairs.len(),
        failures.join(", ")
    );
    if let Some(serde_json::Value::Object(map)) = extra {
        for (k, v) in map {
            let _ = write!(out, ", {}: {}", string(k), v);
        }
    }
    out.push_str("}}\n");
    out
}
