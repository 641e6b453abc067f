use serde_json::{Map, Value};

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Text,
    Json,
    Csv,
}

/// Rows shared by all three renderings; `lines` replaces the default
/// space-joined cells in text mode.
#[derive(Clone, Debug, Default)]
pub struct Table {
    pub name: String,
    pub header: Vec<String>,
    pub rows: Vec<Vec<Value>>,
    pub lines: Option<Vec<String>>,
}

impl Table {
    pub fn new(name: &str, header: &[&str]) -> Self {
        Self {
            name: name.into(),
            header: header.iter().map(|h| h.to_string()).collect(),
            ..Self::default()
        }
    }

    pub fn push(&mut self, row: Vec<Value>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }
}

#[derive(Clone, Debug)]
pub struct Report {
    pub command: String,
    pub seed: u64,
    pub workers: usize,
    pub fields: Vec<(String, Value)>,
    pub tables: Vec<Table>,
    pub pass: Option<bool>,
}

impl Report {
    pub fn new(command: &str, seed: u64, workers: usize) -> Self {
        Self {
            command: command.into(),
            seed,
            workers,
            fields: Vec::new(),
            tables: Vec::new(),
            pass: None,
        }
    }

    pub fn field(&mut self, key: &str, value: impl Into<Value>) {
        self.fields.push((key.into(), value.into()));
    }

    pub fn failed(&self) -> bool {
        self.pass == Some(false)
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Text => self.text(),
            Format::Json => self.json(),
            Format::Csv => self.csv(),
        }
    }

    fn header_line(&self) -> String {
        format!("# nlbench {} seed={} workers={}", self.command, self.seed, self.workers)
    }

    fn text(&self) -> String {
        let mut out = vec![self.header_line()];
        for (k, v) in &self.fields {
            out.push(format!("{k}: {}", cell(v)));
        }
        for t in &self.tables {
            out.push(format!("{}:", t.name));
            match &t.lines {
                Some(lines) => out.extend(lines.iter().map(|l| format!("  {l}"))),
                None => {
                    out.push(format!("  {}", t.header.join("  ")));
                    for r in &t.rows {
                        out.push(format!("  {}", r.iter().map(cell).collect::<Vec<_>>().join("  ")));
                    }
                }
            }
        }
        if let Some(p) = self.pass {
            out.push(format!("verdict: {}", if p { "PASS" } else { "FAIL" }));
        }
        out.join("\n") + "\n"
    }

    fn json(&self) -> String {
        let mut m = Map::new();
        m.insert("command".into(), self.command.clone().into());
        m.insert("seed".into(), self.seed.into());
        m.insert("workers".into(), self.workers.into());
        for (k, v) in &self.fields {
            m.insert(k.clone(), v.clone());
        }
        for t in &self.tables {
            let rows: Vec<Value> = t
                .rows
                .iter()
                .map(|r| Value::Object(t.header.iter().cloned().zip(r.iter().cloned()).collect()))
                .collect();
            m.insert(t.name.clone(), Value::Array(rows));
        }
        if let Some(p) = self.pass {
            m.insert("pass".into(), p.into());
        }
        serde_json::to_string_pretty(&Value::Object(m)).expect("JSON values serialize") + "\n"
    }

    /// Key/value rows, or the first table when there is one.
    fn csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        let write = |w: &mut csv::Writer<Vec<u8>>, rec: Vec<String>| w.write_record(rec).expect("in-memory write");
        match self.tables.first() {
            Some(t) => {
                write(&mut w, t.header.clone());
                for r in &t.rows {
                    write(&mut w, r.iter().map(cell).collect());
                }
            }
            None => {
                write(&mut w, vec!["key".into(), "value".into()]);
                for (k, v) in &self.fields {
                    write(&mut w, vec![k.clone(), cell(v)]);
                }
                if let Some(p) = self.pass {
                    write(&mut w, vec!["pass".into(), p.to_string()]);
                }
            }
        }
        let body = String::from_utf8(w.into_inner().expect("in-memory flush")).expect("UTF-8 cells");
        format!("{}\n{body}", self.header_line())
    }
}

fn cell(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => "-".into(),
        Value::Array(xs) if xs.is_empty() => "none".into(),
        Value::Array(xs) if xs.iter().all(|x| !x.is_array() && !x.is_object()) => {
            xs.iter().map(cell).collect::<Vec<_>>().join(" ")
        }
        other => other.to_string(),
    }
}
