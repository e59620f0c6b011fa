//! The CSV dialect every subcommand emits: LF line endings, a mandatory
//! header row, `#` comment lines allowed anywhere, a fixed field count per
//! row, and no quoting (fields never contain commas or newlines).

/// A parsed CSV document.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CsvTable {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
    /// Comment lines in order of appearance, `#` and padding stripped.
    pub comments: Vec<String>,
}

impl CsvTable {
    /// The value in `column` of the first row matching `key` in column 0.
    pub fn lookup(&self, key: &str, column: usize) -> Option<&str> {
        self.rows
            .iter()
            .find(|row| row[0] == key)
            .map(|row| row[column].as_str())
    }
}

/// Parses a document in the emitted dialect. Rejects anything the tool
/// would not produce: missing trailing newline, missing header, blank
/// lines, or rows whose field count differs from the header's.
pub fn parse(text: &str) -> Result<CsvTable, String> {
    let Some(body) = text.strip_suffix('\n') else {
        return Err("missing trailing newline".into());
    };
    let mut header: Option<Vec<String>> = None;
    let mut rows = Vec::new();
    let mut comments = Vec::new();
    for (idx, line) in body.split('\n').enumerate() {
        let lineno = idx + 1;
        if let Some(comment) = line.strip_prefix('#') {
            comments.push(comment.trim().to_string());
            continue;
        }
        if line.is_empty() {
            return Err(format!("line {lineno}: blank line"));
        }
        let fields: Vec<String> = line.split(',').map(str::to_string).collect();
        match &header {
            None => header = Some(fields),
            Some(h) if fields.len() != h.len() => {
                return Err(format!(
                    "line {lineno}: {} fields where the header has {}",
                    fields.len(),
                    h.len()
                ));
            }
            Some(_) => rows.push(fields),
        }
    }
    let Some(header) = header else {
        return Err("missing header row".into());
    };
    Ok(CsvTable {
        header,
        rows,
        comments,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_comments_header_and_rows() {
        let table = parse("# title\nT,r,N\n1,1,5\n# gap\n2,1,8\n").unwrap();
        assert_eq!(table.header, vec!["T", "r", "N"]);
        assert_eq!(table.rows.len(), 2);
        assert_eq!(table.comments, vec!["title", "gap"]);
        assert_eq!(table.lookup("2", 2), Some("8"));
        assert_eq!(table.lookup("9", 2), None);
    }

    #[test]
    fn rejects_malformed_documents() {
        assert!(parse("a,b\n1,2").is_err()); // no trailing newline
        assert!(parse("# only a comment\n").is_err()); // no header
        assert!(parse("a,b\n1,2,3\n").is_err()); // width mismatch
        assert!(parse("a,b\n\n1,2\n").is_err()); // blank line
        assert!(parse("").is_err());
    }
}
