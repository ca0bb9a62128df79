//! Minimal deterministic SVG rendering of the ROC unit square. Text output
//! only, no timestamps, fixed float formatting, so identical configurations
//! produce byte-identical files.

pub struct RocPoint {
    pub label: String,
    pub color: &'static str,
    pub fpr: f64,
    pub tpr: f64,
}

const WIDTH: f64 = 720.0;
const HEIGHT: f64 = 760.0;
const MARGIN_LEFT: f64 = 70.0;
const MARGIN_TOP: f64 = 20.0;
const PLOT: f64 = 600.0;

fn px(fpr: f64) -> f64 {
    MARGIN_LEFT + fpr * PLOT
}

fn py(tpr: f64) -> f64 {
    MARGIN_TOP + (1.0 - tpr) * PLOT
}

fn fmt(v: f64) -> String {
    format!("{v:.2}")
}

pub fn render_roc(points: &[RocPoint], legend: &[(String, &'static str)]) -> String {
    let mut s = String::new();
    s.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{WIDTH}\" height=\"{HEIGHT}\" viewBox=\"0 0 {WIDTH} {HEIGHT}\">\n"
    ));
    s.push_str("<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n");

    // frame and diagonal of the unit square
    s.push_str(&format!(
        "<rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"none\" stroke=\"black\" stroke-width=\"1\"/>\n",
        fmt(px(0.0)),
        fmt(py(1.0)),
        fmt(PLOT),
        fmt(PLOT)
    ));
    s.push_str(&format!(
        "<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"gray\" stroke-width=\"1\" stroke-dasharray=\"6,4\"/>\n",
        fmt(px(0.0)),
        fmt(py(0.0)),
        fmt(px(1.0)),
        fmt(py(1.0))
    ));

    // ticks and labels every 0.2
    for i in 0..=5 {
        let v = i as f64 / 5.0;
        s.push_str(&format!(
            "<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"black\" stroke-width=\"1\"/>\n",
            fmt(px(v)),
            fmt(py(0.0)),
            fmt(px(v)),
            fmt(py(0.0) + 6.0)
        ));
        s.push_str(&format!(
            "<text x=\"{}\" y=\"{}\" font-size=\"13\" text-anchor=\"middle\">{}</text>\n",
            fmt(px(v)),
            fmt(py(0.0) + 22.0),
            fmt(v)
        ));
        s.push_str(&format!(
            "<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"black\" stroke-width=\"1\"/>\n",
            fmt(px(0.0) - 6.0),
            fmt(py(v)),
            fmt(px(0.0)),
            fmt(py(v))
        ));
        s.push_str(&format!(
            "<text x=\"{}\" y=\"{}\" font-size=\"13\" text-anchor=\"end\">{}</text>\n",
            fmt(px(0.0) - 10.0),
            fmt(py(v) + 4.0),
            fmt(v)
        ));
    }
    s.push_str(&format!(
        "<text x=\"{}\" y=\"{}\" font-size=\"15\" text-anchor=\"middle\">False Positive Rate</text>\n",
        fmt(px(0.5)),
        fmt(py(0.0) + 45.0)
    ));
    s.push_str(&format!(
        "<text x=\"{}\" y=\"{}\" font-size=\"15\" text-anchor=\"middle\" transform=\"rotate(-90 {} {})\">True Positive Rate</text>\n",
        fmt(px(0.0) - 45.0),
        fmt(py(0.5)),
        fmt(px(0.0) - 45.0),
        fmt(py(0.5))
    ));

    // one triangle (0,0)-(1,1)-(FPR,TPR) plus a dot per configuration
    for p in points {
        s.push_str(&format!(
            "<polygon points=\"{},{} {},{} {},{}\" fill=\"{}\" fill-opacity=\"0.10\" stroke=\"{}\" stroke-width=\"1\"/>\n",
            fmt(px(0.0)),
            fmt(py(0.0)),
            fmt(px(1.0)),
            fmt(py(1.0)),
            fmt(px(p.fpr)),
            fmt(py(p.tpr)),
            p.color,
            p.color
        ));
    }
    for p in points {
        s.push_str(&format!(
            "<circle cx=\"{}\" cy=\"{}\" r=\"4\" fill=\"{}\"><title>{}</title></circle>\n",
            fmt(px(p.fpr)),
            fmt(py(p.tpr)),
            p.color,
            p.label
        ));
    }

    // legend row under the axis label
    let mut x = MARGIN_LEFT;
    let y = py(0.0) + 70.0;
    for (label, color) in legend {
        s.push_str(&format!(
            "<circle cx=\"{}\" cy=\"{}\" r=\"5\" fill=\"{color}\"/>\n",
            fmt(x),
            fmt(y - 4.0)
        ));
        s.push_str(&format!(
            "<text x=\"{}\" y=\"{}\" font-size=\"14\">{label}</text>\n",
            fmt(x + 10.0),
            fmt(y)
        ));
        x += 120.0;
    }

    s.push_str("</svg>\n");
    s
}

pub fn rule_color(label: &str) -> &'static str {
    match label {
        "IbyI" => "#d62728",
        "PbyP" => "#1f77b4",
        "CbyC" => "#2ca02c",
        _ => "#7f7f7f",
    }
}
