//! A temperature-indexed table with one column per series, written as CSV
//! or as a bare SVG line plot.

use std::fmt::Write as _;

use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct SeriesTable {
    pub x_label: String,
    pub y_label: String,
    /// `(key, value)` pairs written as `# key = value` lines.
    pub metadata: Vec<(String, String)>,
    pub x: Vec<f64>,
    /// `(column name, values)`; each column has `x.len()` values.
    pub columns: Vec<(String, Vec<f64>)>,
}

impl SeriesTable {
    pub fn new(x_label: impl Into<String>, y_label: impl Into<String>, x: Vec<f64>) -> Self {
        SeriesTable { x_label: x_label.into(), y_label: y_label.into(), metadata: Vec::new(), x, columns: Vec::new() }
    }

    pub fn with_meta(mut self, key: impl Into<String>, value: impl ToString) -> Self {
        self.metadata.push((key.into(), value.to_string()));
        self
    }

    pub fn push_meta(&mut self, key: impl Into<String>, value: impl ToString) {
        self.metadata.push((key.into(), value.to_string()));
    }

    pub fn push_column(&mut self, name: impl Into<String>, values: Vec<f64>) -> Result<()> {
        let name = name.into();
        if values.len() != self.x.len() {
            return Err(Error::InvalidParameter {
                field: "column",
                reason: format!("{name} has {} rows, expected {}", values.len(), self.x.len()),
            });
        }
        self.columns.push((name, values));
        Ok(())
    }

    /// First non-finite cell as `(row, column name)`.
    pub fn first_non_finite(&self) -> Option<(usize, &str)> {
        for (row, x) in self.x.iter().enumerate() {
            if !x.is_finite() {
                return Some((row, self.x_label.as_str()));
            }
            for (name, col) in &self.columns {
                if !col[row].is_finite() {
                    return Some((row, name.as_str()));
                }
            }
        }
        None
    }

    /// Rejects tables with NaN or infinite cells, naming the first one.
    pub fn validate(&self) -> Result<()> {
        match self.first_non_finite() {
            None => Ok(()),
            Some((row, col)) => Err(Error::InvalidParameter {
                field: "table",
                reason: format!("non-finite value at row {row}, column {col}"),
            }),
        }
    }

    /// CSV with `#` metadata lines, a header row and `{:.16e}` cells.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        for (k, v) in &self.metadata {
            let _ = writeln!(out, "# {k} = {v}");
        }
        out.push_str(&self.x_label);
        for (name, _) in &self.columns {
            out.push(',');
            out.push_str(name);
        }
        out.push('\n');
        for (row, x) in self.x.iter().enumerate() {
            let _ = write!(out, "{x:.16e}");
            for (_, col) in &self.columns {
                let _ = write!(out, ",{:.16e}", col[row]);
            }
            out.push('\n');
        }
        out
    }

    /// Polylines, axes and a legend; no ticks beyond the axis extremes.
    pub fn to_svg(&self) -> String {
        const W: f64 = 640.0;
        const H: f64 = 420.0;
        const PAD: f64 = 60.0;
        const COLORS: [&str; 6] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf"];
        let finite = |v: &f64| v.is_finite();
        let (x0, x1) = bounds(self.x.iter().copied().filter(finite));
        let (y0, y1) = bounds(self.columns.iter().flat_map(|(_, c)| c.iter().copied().filter(finite)));
        let sx = |x: f64| PAD + (x - x0) / (x1 - x0) * (W - 2.0 * PAD);
        let sy = |y: f64| H - PAD - (y - y0) / (y1 - y0) * (H - 2.0 * PAD);
        let mut s = String::new();
        let _ = writeln!(s, r#"<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" viewBox="0 0 {W} {H}">"#);
        let _ = writeln!(s, r#"<rect width="{W}" height="{H}" fill="white"/>"#);
        let _ = writeln!(
            s,
            r#"<path d="M{PAD},{PAD} V{} H{}" fill="none" stroke="black"/>"#,
            H - PAD,
            W - PAD
        );
        let _ = writeln!(s, r#"<text x="{}" y="{}" text-anchor="middle" font-size="14">{}</text>"#, W / 2.0, H - 15.0, escape(&self.x_label));
        let _ = writeln!(
            s,
            r#"<text x="15" y="{}" font-size="14" transform="rotate(-90 15 {})" text-anchor="middle">{}</text>"#,
            H / 2.0,
            H / 2.0,
            escape(&self.y_label)
        );
        for (text, x, y, anchor) in [
            (format!("{x0:.3}"), PAD, H - PAD + 18.0, "middle"),
            (format!("{x1:.3}"), W - PAD, H - PAD + 18.0, "middle"),
            (format!("{y0:.4}"), PAD - 5.0, H - PAD, "end"),
            (format!("{y1:.4}"), PAD - 5.0, PAD + 4.0, "end"),
        ] {
            let _ = writeln!(s, r#"<text x="{x}" y="{y}" font-size="11" text-anchor="{anchor}">{text}</text>"#);
        }
        for (i, (name, col)) in self.columns.iter().enumerate() {
            let color = COLORS[i % COLORS.len()];
            let pts: Vec<String> = self
                .x
                .iter()
                .zip(col)
                .filter(|(x, y)| x.is_finite() && y.is_finite())
                .map(|(x, y)| format!("{:.2},{:.2}", sx(*x), sy(*y)))
                .collect();
            let _ = writeln!(s, r#"<polyline fill="none" stroke="{color}" stroke-width="1.5" points="{}"/>"#, pts.join(" "));
            let ly = PAD + 18.0 * i as f64;
            let _ = writeln!(s, r#"<line x1="{}" y1="{ly}" x2="{}" y2="{ly}" stroke="{color}" stroke-width="2"/>"#, W - PAD - 120.0, W - PAD - 95.0);
            let _ = writeln!(s, r#"<text x="{}" y="{}" font-size="12">{}</text>"#, W - PAD - 90.0, ly + 4.0, escape(name));
        }
        s.push_str("</svg>\n");
        s
    }
}

fn bounds(values: impl Iterator<Item = f64>) -> (f64, f64) {
    let (lo, hi) = values.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| (lo.min(v), hi.max(v)));
    if !lo.is_finite() {
        (0.0, 1.0)
    } else if hi > lo {
        (lo, hi)
    } else {
        (lo - 0.5, hi + 0.5)
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_layout() {
        let mut t = SeriesTable::new("T", "C [k_B]", vec![1.0, 2.0]).with_meta("m", 1);
        t.push_column("k=-0.1", vec![0.5, 0.25]).unwrap();
        let csv = t.to_csv();
        assert_eq!(
            csv,
            "# m = 1\nT,k=-0.1\n1.0000000000000000e0,5.0000000000000000e-1\n2.0000000000000000e0,2.5000000000000000e-1\n"
        );
    }

    #[test]
    fn nan_cells_are_located() {
        let mut t = SeriesTable::new("T", "U", vec![1.0, 2.0, 3.0]);
        t.push_column("a", vec![1.0, 2.0, 3.0]).unwrap();
        t.push_column("b", vec![1.0, f64::NAN, 3.0]).unwrap();
        assert_eq!(t.first_non_finite(), Some((1, "b")));
        assert!(t.validate().is_err());
        assert!(t.push_column("c", vec![1.0]).is_err());
    }

    #[test]
    fn svg_has_one_polyline_per_column() {
        let mut t = SeriesTable::new("T", "U", vec![1.0, 2.0, 3.0]);
        t.push_column("a", vec![1.0, 2.0, 3.0]).unwrap();
        t.push_column("b", vec![3.0, 2.0, 1.0]).unwrap();
        assert_eq!(t.to_svg().matches("<polyline").count(), 2);
    }
}
