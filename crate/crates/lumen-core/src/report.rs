//! Text rendering for evaluation reports and model inspection output.

use crate::eval::{EvalReport, GridSearchResult};
use crate::topics::TopicModel;

/// Comparison table over methods, one row each.
pub fn render_comparison(reports: &[&EvalReport]) -> String {
    let mut out = String::new();
    out.push_str(&format!(
        "{:<14} {:>10} {:>10} {:>10}\n",
        "method", "F1-macro", "F1-micro", "accuracy"
    ));
    for report in reports {
        out.push_str(&format!(
            "{:<14} {:>9.2}% {:>9.2}% {:>9.2}%\n",
            report.method,
            100.0 * report.mean.f1_macro,
            100.0 * report.mean.f1_micro,
            100.0 * report.mean.accuracy
        ));
    }
    out
}

/// Full single-method report: headline numbers, folds, per-label table.
pub fn render_report(report: &EvalReport) -> String {
    let mut out = String::new();
    out.push_str(&format!("method: {}\n", report.method));
    out.push_str(&format!(
        "mean over folds:   F1-macro {:.4}  F1-micro {:.4}  accuracy {:.4}  exact-match {:.4}\n",
        report.mean.f1_macro, report.mean.f1_micro, report.mean.accuracy, report.mean.exact_match
    ));
    out.push_str(&format!(
        "pooled counts:     F1-macro {:.4}  F1-micro {:.4}  accuracy {:.4}  exact-match {:.4}\n",
        report.pooled.f1_macro,
        report.pooled.f1_micro,
        report.pooled.accuracy,
        report.pooled.exact_match
    ));
    out.push_str(&format!(
        "\n{:<6} {:>7} {:>9} {:>10} {:>10} {:>10}\n",
        "fold", "tested", "filtered", "F1-macro", "F1-micro", "accuracy"
    ));
    for fold in &report.folds {
        out.push_str(&format!(
            "{:<6} {:>7} {:>9} {:>10.4} {:>10.4} {:>10.4}\n",
            fold.fold,
            fold.n_test,
            fold.n_filtered,
            fold.summary.f1_macro,
            fold.summary.f1_micro,
            fold.summary.accuracy
        ));
    }
    out.push_str(&format!(
        "\n{:<18} {:>9} {:>9} {:>9} {:>6} {:>6} {:>6} {:>6}\n",
        "label", "precision", "recall", "F1", "TP", "FP", "FN", "TN"
    ));
    for pl in &report.per_label {
        out.push_str(&format!(
            "{:<18} {:>9.4} {:>9.4} {:>9.4} {:>6} {:>6} {:>6} {:>6}\n",
            pl.label,
            pl.precision,
            pl.recall,
            pl.f1,
            pl.counts.tp,
            pl.counts.fp,
            pl.counts.fn_,
            pl.counts.tn
        ));
    }
    out
}

pub fn render_grid(result: &GridSearchResult) -> String {
    let mut out = String::new();
    out.push_str(&format!(
        "{:>7} {:>7} {:>10} {:>10} {:>10}\n",
        "topics", "trees", "F1-macro", "F1-micro", "accuracy"
    ));
    for cell in &result.cells {
        out.push_str(&format!(
            "{:>7} {:>7} {:>10.4} {:>10.4} {:>10.4}\n",
            cell.topics,
            cell.trees,
            cell.summary.f1_macro,
            cell.summary.f1_micro,
            cell.summary.accuracy
        ));
    }
    out.push_str(&format!(
        "\nbest: topics={} trees={} objective={:.4}\n",
        result.best_topics, result.best_trees, result.best_objective
    ));
    out
}

/// `topics top-words` style listing.
pub fn render_top_words(model: &TopicModel, n: usize) -> String {
    let mut out = String::new();
    for (t, words) in model.top_words(n).iter().enumerate() {
        let list: Vec<String> = words.iter().map(|(w, _)| w.clone()).collect();
        out.push_str(&format!("topic_{t}: {}\n", list.join(", ")));
    }
    out
}

/// Importance table as CSV (name, importance), descending.
pub fn render_importance_csv(ranked: &[(String, f64)]) -> String {
    let mut out = String::from("feature,importance\n");
    for (name, value) in ranked {
        out.push_str(&format!("{name},{value}\n"));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eval::{EvalReport, FoldMetrics, MetricSummary};

    fn dummy_report(name: &str) -> EvalReport {
        let summary = MetricSummary {
            f1_macro: 0.5830,
            f1_micro: 0.6923,
            accuracy: 0.7,
            exact_match: 0.4,
        };
        EvalReport {
            method: name.into(),
            mean: summary,
            pooled: summary,
            per_label: vec![],
            folds: vec![FoldMetrics {
                fold: 0,
                n_test: 10,
                n_filtered: 0,
                summary,
            }],
        }
    }

    #[test]
    fn comparison_table_lists_methods() {
        let lumen = dummy_report("lumen");
        let naive = dummy_report("naive");
        let table = render_comparison(&[&lumen, &naive]);
        assert!(table.contains("lumen"));
        assert!(table.contains("naive"));
        assert!(table.contains("69.23%"));
    }

    #[test]
    fn importance_csv_shape() {
        let csv = render_importance_csv(&[("money_liwc".into(), 0.095), ("topic_5".into(), 0.088)]);
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "feature,importance");
        assert_eq!(lines[1], "money_liwc,0.095");
    }
}
