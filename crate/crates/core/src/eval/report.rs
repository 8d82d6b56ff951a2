use std::fmt::Write as _;
use std::io::Write;

use super::{Counts, EvalReport, Metrics};
use crate::scalar::Real;

fn opt<T: Real>(v: Option<T>) -> String {
    v.map(|v| format!("{:.6}", v.as_f64())).unwrap_or_default()
}

fn metric_cells<T: Real>(m: &Metrics<T>) -> [String; 3] {
    [m.recall, m.precision, m.f1].map(|v| format!("{:.6}", v.as_f64()))
}

fn count_cells(c: Option<&Counts>) -> [String; 3] {
    match c {
        Some(c) => [c.tp.to_string(), c.fp.to_string(), c.fn_.to_string()],
        None => Default::default(),
    }
}

/// `site,recall,precision,f1,ap50,tp,fp,fn`; one row per site, then
/// `macro` (counts left empty) and `micro`.
pub fn report_to_csv<T: Real>(report: &EvalReport<T>, out: impl Write) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["site", "recall", "precision", "f1", "ap50", "tp", "fp", "fn"])?;
    let mut row = |name: &str, m: &Metrics<T>, ap: Option<T>, c: Option<&Counts>| {
        let mut rec = vec![name.to_string()];
        rec.extend(metric_cells(m));
        rec.push(opt(ap));
        rec.extend(count_cells(c));
        w.write_record(&rec)
    };
    for s in &report.sites {
        row(&s.site, &s.metrics, s.ap50, Some(&s.counts))?;
    }
    row("macro", &report.macro_avg, report.macro_ap50, None)?;
    row("micro", &report.micro, report.micro_ap50, Some(&report.micro_counts))?;
    w.flush()?;
    Ok(())
}

/// Fixed-width table with three decimals.
pub fn report_to_text<T: Real>(report: &EvalReport<T>) -> String {
    let mut s = String::new();
    let _ = writeln!(
        s,
        "{:<12} {:>7} {:>9} {:>7} {:>7} {:>7} {:>7} {:>7}",
        "Site", "Recall", "Precision", "F1", "AP@.5", "TP", "FP", "FN"
    );
    let mut line = |name: &str, m: &Metrics<T>, ap: Option<T>, c: Option<&Counts>| {
        let ap = ap.map(|v| format!("{:.3}", v.as_f64())).unwrap_or_else(|| "-".into());
        let [tp, fp, fn_] = count_cells(c);
        let _ = writeln!(
            s,
            "{:<12} {:>7.3} {:>9.3} {:>7.3} {:>7} {:>7} {:>7} {:>7}",
            name,
            m.recall.as_f64(),
            m.precision.as_f64(),
            m.f1.as_f64(),
            ap,
            tp,
            fp,
            fn_
        );
    };
    for r in &report.sites {
        line(&r.site, &r.metrics, r.ap50, Some(&r.counts));
    }
    line("Macro avg.", &report.macro_avg, report.macro_ap50, None);
    line("Micro avg.", &report.micro, report.micro_ap50, Some(&report.micro_counts));
    s
}
