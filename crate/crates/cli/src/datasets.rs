//! Tables bundled with the tool: the worked examples and the prostatic
//! cancer case-control data.

use chi_audit_core::ContingencyTable;

use crate::error::CliError;

pub struct Dataset {
    pub name: &'static str,
    pub description: &'static str,
    pub row_labels: &'static [&'static str],
    pub col_labels: &'static [&'static str],
    pub rows: &'static [&'static [f64]],
}

pub const DATASETS: [Dataset; 4] = [
    Dataset {
        name: "example1",
        description: "2x2 table with rows (1, 1) and (1, 11)",
        row_labels: &["Category A", "Category B"],
        col_labels: &["Group 1", "Group 2"],
        rows: &[&[1.0, 1.0], &[1.0, 11.0]],
    },
    Dataset {
        name: "example2",
        description: "2x2 table with rows (22, 18) and (18, 22)",
        row_labels: &["Category 1", "Category 2"],
        col_labels: &["Group A", "Group B"],
        rows: &[&[22.0, 18.0], &[18.0, 22.0]],
    },
    Dataset {
        name: "example3",
        description: "3x4 table with column totals (251, 230, 249, 199)",
        row_labels: &["Category A", "Category B", "Category C"],
        col_labels: &["Group 1", "Group 2", "Group 3", "Group 4"],
        rows: &[&[98.0, 86.0, 79.0, 71.0], &[78.0, 82.0, 88.0, 51.0], &[75.0, 62.0, 82.0, 77.0]],
    },
    Dataset {
        name: "cancer",
        description: "prostatic cancer cases and controls by ethnicity (Alberta case-control study)",
        row_labels: &["British", "French", "German", "Ukrainian", "Others"],
        col_labels: &["Cases", "Controls"],
        rows: &[&[200.0, 279.0], &[16.0, 20.0], &[55.0, 93.0], &[31.0, 79.0], &[74.0, 149.0]],
    },
];

pub fn find(name: &str) -> Result<&'static Dataset, CliError> {
    DATASETS.iter().find(|d| d.name == name).ok_or_else(|| CliError::UnknownDataset(name.to_owned()))
}

impl Dataset {
    pub fn table(&self) -> ContingencyTable {
        let labels = |l: &[&str]| Some(l.iter().map(|s| s.to_string()).collect());
        ContingencyTable::from_rows(self.rows)
            .and_then(|t| t.with_labels(labels(self.row_labels), labels(self.col_labels)))
            .expect("bundled datasets are valid")
    }
}
