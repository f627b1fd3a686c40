//! Artifact writers. Every file is written to a temporary sibling and
//! renamed into place, and embeds the seed and config digest.

use std::io::Write;
use std::path::{Path, PathBuf};

pub struct Artifacts {
    dir: PathBuf,
    seed: u64,
    digest: String,
    pub written: Vec<PathBuf>,
}

impl Artifacts {
    pub fn new(dir: PathBuf, seed: u64, digest: String) -> std::io::Result<Self> {
        std::fs::create_dir_all(&dir)?;
        Ok(Self { dir, seed, digest, written: Vec::new() })
    }

    pub fn digest(&self) -> &str {
        &self.digest
    }

    pub fn write(&mut self, name: &str, bytes: &[u8]) -> std::io::Result<PathBuf> {
        let path = self.dir.join(name);
        atomic_write(&path, bytes)?;
        self.written.push(path.clone());
        Ok(path)
    }

    /// CSV with `# seed` and `# config_digest` comment lines before the header.
    pub fn csv(&mut self, name: &str, header: &[&str], rows: &[Vec<f64>]) -> std::io::Result<PathBuf> {
        let mut s = format!("# seed={}\n# config_digest={}\n{}\n", self.seed, self.digest, header.join(","));
        for r in rows {
            let cells: Vec<String> = r.iter().map(|v| v.to_string()).collect();
            s.push_str(&cells.join(","));
            s.push('\n');
        }
        self.write(name, s.as_bytes())
    }

    pub fn json(&mut self, name: &str, value: &serde_json::Value) -> std::io::Result<PathBuf> {
        let mut s = serde_json::to_string_pretty(value).expect("json values serialize");
        s.push('\n');
        self.write(name, s.as_bytes())
    }

    /// Line plot of one or more series against a common x column.
    pub fn svg(&mut self, name: &str, title: &str, xs: &[f64], series: &[(&str, Vec<f64>)]) -> std::io::Result<PathBuf> {
        let svg = line_plot(title, xs, series, self.seed, &self.digest);
        self.write(name, svg.as_bytes())
    }
}

pub fn atomic_write(path: &Path, bytes: &[u8]) -> std::io::Result<()> {
    let dir = path.parent().filter(|p| !p.as_os_str().is_empty()).unwrap_or(Path::new("."));
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(bytes)?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| e.error)?;
    Ok(())
}

const COLORS: [&str; 4] = ["#1f5fa8", "#c0392b", "#2e8b57", "#8e44ad"];

fn line_plot(title: &str, xs: &[f64], series: &[(&str, Vec<f64>)], seed: u64, digest: &str) -> String {
    let (w, h, m) = (640.0, 400.0, 48.0);
    let finite = |v: &&f64| v.is_finite();
    let x_lo = xs.iter().filter(finite).cloned().fold(f64::INFINITY, f64::min);
    let x_hi = xs.iter().filter(finite).cloned().fold(f64::NEG_INFINITY, f64::max);
    let ys = series.iter().flat_map(|(_, v)| v.iter()).filter(finite);
    let (y_lo, y_hi) = ys.fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &v| (a.min(v), b.max(v)));
    let span = |lo: f64, hi: f64| if hi > lo { hi - lo } else { 1.0 };
    let px = |x: f64| m + (x - x_lo) / span(x_lo, x_hi) * (w - 2.0 * m);
    let py = |y: f64| h - m - (y - y_lo) / span(y_lo, y_hi) * (h - 2.0 * m);
    let mut s = format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{w}\" height=\"{h}\" viewBox=\"0 0 {w} {h}\">\n\
         <!-- seed={seed} config_digest={digest} -->\n\
         <rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n\
         <text x=\"{m}\" y=\"24\" font-family=\"sans-serif\" font-size=\"14\">{}</text>\n\
         <rect x=\"{m}\" y=\"{m}\" width=\"{}\" height=\"{}\" fill=\"none\" stroke=\"#888\"/>\n",
        escape(title),
        w - 2.0 * m,
        h - 2.0 * m
    );
    for (label, x, y, anchor) in [
        (format!("{x_lo:.3}"), m, h - m + 16.0, "start"),
        (format!("{x_hi:.3}"), w - m, h - m + 16.0, "end"),
        (format!("{y_lo:.3}"), m - 4.0, h - m, "end"),
        (format!("{y_hi:.3}"), m - 4.0, m + 10.0, "end"),
    ] {
        s.push_str(&format!("<text x=\"{x}\" y=\"{y}\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"{anchor}\">{label}</text>\n"));
    }
    for (k, (name, ys)) in series.iter().enumerate() {
        let pts: Vec<String> = xs
            .iter()
            .zip(ys)
            .filter(|(x, y)| x.is_finite() && y.is_finite())
            .map(|(&x, &y)| format!("{:.2},{:.2}", px(x), py(y)))
            .collect();
        let c = COLORS[k % COLORS.len()];
        s.push_str(&format!("<polyline fill=\"none\" stroke=\"{c}\" stroke-width=\"1.5\" points=\"{}\"/>\n", pts.join(" ")));
        s.push_str(&format!(
            "<text x=\"{}\" y=\"{}\" font-family=\"sans-serif\" font-size=\"11\" fill=\"{c}\" text-anchor=\"end\">{}</text>\n",
            w - m - 4.0,
            m + 14.0 * (k + 1) as f64,
            escape(name)
        ));
    }
    s.push_str("</svg>\n");
    s
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}
