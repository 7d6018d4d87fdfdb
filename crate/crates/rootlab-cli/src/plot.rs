//! Minimal SVG line charts for the stress-report panels.

/// One curve: label plus (x, y, ci) triples.
pub struct Series {
    pub label: String,
    pub points: Vec<(f64, f64, f64)>,
}

const COLORS: [&str; 6] = ["#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b"];
const W: f64 = 520.0;
const H: f64 = 400.0;
const ML: f64 = 60.0; // margins
const MR: f64 = 20.0;
const MT: f64 = 40.0;
const MB: f64 = 56.0;

fn x_transform(x: f64, lo: f64, hi: f64, log: bool) -> f64 {
    let (x, lo, hi) = if log { (x.ln(), lo.ln(), hi.ln()) } else { (x, lo, hi) };
    ML + (x - lo) / (hi - lo).max(1e-12) * (W - ML - MR)
}

fn y_transform(y: f64, lo: f64, hi: f64) -> f64 {
    H - MB - (y - lo) / (hi - lo).max(1e-12) * (H - MT - MB)
}

/// Render an SVG line chart with error bars. Y axis spans [y_lo, 1.02].
pub fn line_chart(
    title: &str,
    x_label: &str,
    y_label: &str,
    log_x: bool,
    series: &[Series],
) -> String {
    let xs: Vec<f64> = series.iter().flat_map(|s| s.points.iter().map(|p| p.0)).collect();
    let ys: Vec<f64> = series.iter().flat_map(|s| s.points.iter().map(|p| p.1)).collect();
    let x_lo = xs.iter().copied().fold(f64::INFINITY, f64::min);
    let x_hi = xs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let y_lo = (ys.iter().copied().fold(f64::INFINITY, f64::min) - 0.05).clamp(0.0, 1.0);
    let y_hi = 1.02;

    let mut svg = String::new();
    svg.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{W}\" height=\"{H}\" \
         viewBox=\"0 0 {W} {H}\" font-family=\"sans-serif\" font-size=\"12\">\n"
    ));
    svg.push_str(&format!(
        "<rect width=\"{W}\" height=\"{H}\" fill=\"white\"/>\n\
         <text x=\"{}\" y=\"20\" text-anchor=\"middle\" font-size=\"14\">{title}</text>\n",
        W / 2.0
    ));

    // Axes.
    svg.push_str(&format!(
        "<line x1=\"{ML}\" y1=\"{0}\" x2=\"{1}\" y2=\"{0}\" stroke=\"black\"/>\n\
         <line x1=\"{ML}\" y1=\"{MT}\" x2=\"{ML}\" y2=\"{0}\" stroke=\"black\"/>\n",
        H - MB,
        W - MR
    ));
    svg.push_str(&format!(
        "<text x=\"{}\" y=\"{}\" text-anchor=\"middle\">{x_label}</text>\n",
        (ML + W - MR) / 2.0,
        H - 14.0
    ));
    svg.push_str(&format!(
        "<text x=\"16\" y=\"{}\" text-anchor=\"middle\" transform=\"rotate(-90 16 {})\">{y_label}</text>\n",
        (MT + H - MB) / 2.0,
        (MT + H - MB) / 2.0
    ));

    // Y ticks every 0.1.
    let mut t = (y_lo * 10.0).ceil() / 10.0;
    while t <= y_hi {
        let y = y_transform(t, y_lo, y_hi);
        svg.push_str(&format!(
            "<line x1=\"{0}\" y1=\"{y}\" x2=\"{1}\" y2=\"{y}\" stroke=\"#ddd\"/>\n\
             <text x=\"{2}\" y=\"{3}\" text-anchor=\"end\">{t:.1}</text>\n",
            ML,
            W - MR,
            ML - 6.0,
            y + 4.0
        ));
        t += 0.1;
    }
    // X ticks at the observed points.
    let mut seen: Vec<f64> = xs.clone();
    seen.sort_by(f64::total_cmp);
    seen.dedup();
    for x in &seen {
        let px = x_transform(*x, x_lo, x_hi, log_x);
        svg.push_str(&format!(
            "<line x1=\"{px}\" y1=\"{0}\" x2=\"{px}\" y2=\"{1}\" stroke=\"black\"/>\n\
             <text x=\"{px}\" y=\"{2}\" text-anchor=\"middle\">{x}</text>\n",
            H - MB,
            H - MB + 4.0,
            H - MB + 18.0
        ));
    }

    for (si, s) in series.iter().enumerate() {
        let color = COLORS[si % COLORS.len()];
        let path: Vec<String> = s
            .points
            .iter()
            .map(|&(x, y, _)| {
                format!(
                    "{:.1},{:.1}",
                    x_transform(x, x_lo, x_hi, log_x),
                    y_transform(y.clamp(y_lo, y_hi), y_lo, y_hi)
                )
            })
            .collect();
        svg.push_str(&format!(
            "<polyline points=\"{}\" fill=\"none\" stroke=\"{color}\" stroke-width=\"2\"/>\n",
            path.join(" ")
        ));
        for &(x, y, ci) in &s.points {
            let px = x_transform(x, x_lo, x_hi, log_x);
            let py = y_transform(y.clamp(y_lo, y_hi), y_lo, y_hi);
            let lo = y_transform((y - ci).clamp(y_lo, y_hi), y_lo, y_hi);
            let hi = y_transform((y + ci).clamp(y_lo, y_hi), y_lo, y_hi);
            svg.push_str(&format!(
                "<line x1=\"{px}\" y1=\"{lo:.1}\" x2=\"{px}\" y2=\"{hi:.1}\" stroke=\"{color}\"/>\n\
                 <circle cx=\"{px}\" cy=\"{py:.1}\" r=\"3\" fill=\"{color}\"/>\n"
            ));
        }
        // Legend.
        let ly = MT + 14.0 * si as f64;
        svg.push_str(&format!(
            "<line x1=\"{0}\" y1=\"{ly}\" x2=\"{1}\" y2=\"{ly}\" stroke=\"{color}\" stroke-width=\"2\"/>\n\
             <text x=\"{2}\" y=\"{3}\">{4}</text>\n",
            W - MR - 110.0,
            W - MR - 90.0,
            W - MR - 84.0,
            ly + 4.0,
            s.label
        ));
    }
    svg.push_str("</svg>\n");
    svg
}
