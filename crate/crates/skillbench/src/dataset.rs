//! Match files: CSV and JSON Lines with one flat record per match.
//!
//! Columns are `match_id,team1,team2,p1_1..p1_5,p2_1..p2_5,outcome,timestamp`.
//! Outcomes are `win1`, `win2` or `draw` (case-insensitive; `1`, `2` and `d`
//! are accepted too). Names are interned in first-seen order, so loading the
//! same file twice yields the same handles.

use std::fs::File;
use std::io::{BufRead, BufReader, Read, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Deserializer, Serialize};
use skillbench_core::data::ROSTER_SIZE;
use skillbench_core::synth::SynthDataset;
use skillbench_core::{MatchDataset, MatchId, MatchRecord, Names, Outcome, Team};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Jsonl,
}

impl Format {
    /// `.jsonl` / `.ndjson` are JSON Lines; anything else is CSV.
    pub fn from_path(path: &Path) -> Format {
        match path.extension().and_then(|e| e.to_str()) {
            Some("jsonl") | Some("ndjson") => Format::Jsonl,
            _ => Format::Csv,
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum LoadError {
    #[error("cannot read {path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("row {row}: {message}")]
    Row { row: usize, message: String },
    #[error(transparent)]
    Dataset(#[from] skillbench_core::Error),
}

fn row_error(row: usize, message: impl ToString) -> LoadError {
    LoadError::Row { row, message: message.to_string() }
}

/// A dataset together with the names behind its handles.
#[derive(Clone, Debug, PartialEq)]
pub struct LoadedDataset {
    pub dataset: MatchDataset,
    pub names: Names,
}

fn string_or_number<'de, D: Deserializer<'de>>(d: D) -> Result<String, D::Error> {
    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Raw {
        S(String),
        I(i64),
        U(u64),
    }
    Ok(match Raw::deserialize(d)? {
        Raw::S(s) => s,
        Raw::I(i) => i.to_string(),
        Raw::U(u) => u.to_string(),
    })
}

fn opt_string_or_number<'de, D: Deserializer<'de>>(d: D) -> Result<Option<String>, D::Error> {
    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Raw {
        S(String),
        I(i64),
        U(u64),
    }
    Ok(Option::<Raw>::deserialize(d)?.map(|r| match r {
        Raw::S(s) => s,
        Raw::I(i) => i.to_string(),
        Raw::U(u) => u.to_string(),
    }))
}

/// One line of a match file.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct MatchRow {
    #[serde(deserialize_with = "string_or_number")]
    pub match_id: String,
    #[serde(deserialize_with = "string_or_number")]
    pub team1: String,
    #[serde(deserialize_with = "string_or_number")]
    pub team2: String,
    #[serde(default, deserialize_with = "opt_string_or_number")]
    pub p1_1: Option<String>,
    #[serde(default, deserialize_with = "opt_string_or_number")]
    pub p1_2: Option<String>,
    #[serde(default, deserialize_with = "opt_string_or_number")]
    pub p1_3: Option<String>,
    #[serde(default, deserialize_with = "opt_string_or_number")]
    pub p1_4: Option<String>,
    #[serde(default, deserialize_with = "opt_string_or_number")]
    pub p1_5: Option<String>,
    #[serde(default, deserialize_with = "opt_string_or_number")]
    pub p2_1: Option<String>,
    #[serde(default, deserialize_with = "opt_string_or_number")]
    pub p2_2: Option<String>,
    #[serde(default, deserialize_with = "opt_string_or_number")]
    pub p2_3: Option<String>,
    #[serde(default, deserialize_with = "opt_string_or_number")]
    pub p2_4: Option<String>,
    #[serde(default, deserialize_with = "opt_string_or_number")]
    pub p2_5: Option<String>,
    pub outcome: String,
    pub timestamp: i64,
}

impl MatchRow {
    fn roster(&self, side: usize) -> [&Option<String>; ROSTER_SIZE] {
        if side == 1 {
            [&self.p1_1, &self.p1_2, &self.p1_3, &self.p1_4, &self.p1_5]
        } else {
            [&self.p2_1, &self.p2_2, &self.p2_3, &self.p2_4, &self.p2_5]
        }
    }

    fn from_record(record: &MatchRecord, names: &Names) -> MatchRow {
        let p = |team: &Team, k: usize| Some(names.player_name(team.roster[k]).to_string());
        let (a, b) = (&record.team1, &record.team2);
        MatchRow {
            match_id: names.match_name(record.id).to_string(),
            team1: names.team_name(a.id).to_string(),
            team2: names.team_name(b.id).to_string(),
            p1_1: p(a, 0),
            p1_2: p(a, 1),
            p1_3: p(a, 2),
            p1_4: p(a, 3),
            p1_5: p(a, 4),
            p2_1: p(b, 0),
            p2_2: p(b, 1),
            p2_3: p(b, 2),
            p2_4: p(b, 3),
            p2_5: p(b, 4),
            outcome: outcome_token(record.outcome).to_string(),
            timestamp: record.timestamp,
        }
    }
}

pub fn parse_outcome(token: &str) -> Option<Outcome> {
    match token.trim().to_ascii_lowercase().as_str() {
        "win1" | "1" => Some(Outcome::Win1),
        "win2" | "2" => Some(Outcome::Win2),
        "draw" | "d" => Some(Outcome::Draw),
        _ => None,
    }
}

pub fn outcome_token(outcome: Outcome) -> &'static str {
    match outcome {
        Outcome::Win1 => "win1",
        Outcome::Win2 => "win2",
        Outcome::Draw => "draw",
    }
}

/// Incrementally turns rows into records, interning names as it goes.
#[derive(Default)]
struct Builder {
    names: Names,
    records: Vec<MatchRecord>,
}

impl Builder {
    fn push(&mut self, row: usize, r: MatchRow) -> Result<(), LoadError> {
        let mut team = |name: &str, side: usize| -> Result<Team, LoadError> {
            if name.trim().is_empty() {
                return Err(row_error(row, format!("team{side} id is empty")));
            }
            let players: Vec<_> = r
                .roster(side)
                .iter()
                .filter_map(|p| p.as_deref().map(str::trim).filter(|s| !s.is_empty()))
                .map(|p| self.names.player(p))
                .collect();
            if players.len() != ROSTER_SIZE {
                return Err(row_error(row, format!("team{side} has {} players, expected {ROSTER_SIZE}", players.len())));
            }
            let id = self.names.team(name.trim());
            Team::new(id, &players).map_err(|e| row_error(row, format!("team{side}: {e}")))
        };
        let t1 = team(&r.team1, 1)?;
        let t2 = team(&r.team2, 2)?;
        let outcome = parse_outcome(&r.outcome).ok_or_else(|| row_error(row, format!("unknown outcome {:?}", r.outcome)))?;
        if r.match_id.trim().is_empty() {
            return Err(row_error(row, "match_id is empty"));
        }
        if self.names.matches.get(r.match_id.trim()).is_some() {
            return Err(row_error(row, format!("duplicate match_id {:?}", r.match_id)));
        }
        let id = MatchId(self.names.matches.intern(r.match_id.trim()));
        let record = MatchRecord::new(id, t1, t2, outcome, r.timestamp).map_err(|e| row_error(row, e))?;
        self.records.push(record);
        Ok(())
    }

    fn finish(self) -> Result<LoadedDataset, LoadError> {
        Ok(LoadedDataset { dataset: MatchDataset::from_records(self.records)?, names: self.names })
    }
}

/// Parses CSV with a header line. Rows are numbered from 1, excluding the
/// header.
pub fn read_csv<R: Read>(reader: R) -> Result<LoadedDataset, LoadError> {
    let mut csv = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(reader);
    let mut builder = Builder::default();
    for (i, row) in csv.deserialize::<MatchRow>().enumerate() {
        let row_no = i + 1;
        let row = row.map_err(|e| row_error(row_no, csv_message(&e)))?;
        builder.push(row_no, row)?;
    }
    builder.finish()
}

fn csv_message(e: &csv::Error) -> String {
    match e.kind() {
        csv::ErrorKind::Deserialize { err, .. } => match err.field() {
            Some(_) => err.to_string(),
            None => err.kind().to_string(),
        },
        csv::ErrorKind::UnequalLengths { expected_len, len, .. } => format!("expected {expected_len} fields, found {len}"),
        _ => e.to_string(),
    }
}

/// Parses JSON Lines; blank lines are skipped but still counted.
pub fn read_jsonl<R: BufRead>(reader: R) -> Result<LoadedDataset, LoadError> {
    let mut builder = Builder::default();
    for (i, line) in reader.lines().enumerate() {
        let row_no = i + 1;
        let line = line.map_err(|e| row_error(row_no, e))?;
        if line.trim().is_empty() {
            continue;
        }
        let row: MatchRow = serde_json::from_str(&line).map_err(|e| row_error(row_no, e))?;
        builder.push(row_no, row)?;
    }
    builder.finish()
}

pub fn load_dataset(path: &Path, format: Option<Format>) -> Result<LoadedDataset, LoadError> {
    let file = File::open(path).map_err(|source| LoadError::Io { path: path.to_path_buf(), source })?;
    match format.unwrap_or_else(|| Format::from_path(path)) {
        Format::Csv => read_csv(file),
        Format::Jsonl => read_jsonl(BufReader::new(file)),
    }
}

pub fn write_csv<W: Write>(writer: W, dataset: &MatchDataset, names: &Names) -> csv::Result<()> {
    let mut csv = csv::Writer::from_writer(writer);
    for record in dataset {
        csv.serialize(MatchRow::from_record(record, names))?;
    }
    csv.flush()?;
    Ok(())
}

pub fn write_jsonl<W: Write>(mut writer: W, dataset: &MatchDataset, names: &Names) -> std::io::Result<()> {
    for record in dataset {
        serde_json::to_writer(&mut writer, &MatchRow::from_record(record, names))?;
        writer.write_all(b"\n")?;
    }
    Ok(())
}

/// Names for a generated dataset: `team0001`, `player00005`, `m000001`.
pub fn synth_names(synth: &SynthDataset) -> Names {
    let mut names = Names::default();
    for t in 0..synth.team_skills.len() {
        names.team(&format!("team{t:04}"));
    }
    for p in 0..synth.player_skills.len() {
        names.player(&format!("player{p:05}"));
    }
    for r in synth.dataset.iter() {
        names.matches.intern(&format!("m{:06}", r.id.0));
    }
    names
}

/// Sidecar with one row per team: `team,latent_skill`.
pub fn write_latent_csv<W: Write>(writer: W, synth: &SynthDataset, names: &Names) -> csv::Result<()> {
    let mut csv = csv::Writer::from_writer(writer);
    csv.write_record(["team", "latent_skill"])?;
    for (t, s) in synth.team_skills.iter().enumerate() {
        csv.write_record([names.team_name(skillbench_core::TeamId(t as u32)), &format!("{s:.9}")])?;
    }
    csv.flush()?;
    Ok(())
}

/// Simple descriptive counts of a dataset.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DatasetSummary {
    pub matches: usize,
    pub teams: usize,
    pub players: usize,
    pub win1: usize,
    pub win2: usize,
    pub draws: usize,
}

pub fn summarize(loaded: &LoadedDataset) -> DatasetSummary {
    let count = |o: Outcome| loaded.dataset.iter().filter(|r| r.outcome == o).count();
    DatasetSummary {
        matches: loaded.dataset.len(),
        teams: loaded.names.teams.len(),
        players: loaded.names.players.len(),
        win1: count(Outcome::Win1),
        win2: count(Outcome::Win2),
        draws: count(Outcome::Draw),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const HEADER: &str = "match_id,team1,team2,p1_1,p1_2,p1_3,p1_4,p1_5,p2_1,p2_2,p2_3,p2_4,p2_5,outcome,timestamp\n";

    fn row(id: &str, t1: &str, t2: &str, outcome: &str) -> String {
        let roster = |t: &str| (1..=5).map(|k| format!("{t}_p{k}")).collect::<Vec<_>>().join(",");
        format!("{id},{t1},{t2},{},{},{outcome},1600000000\n", roster(t1), roster(t2))
    }

    #[test]
    fn three_rows() {
        let text = format!("{HEADER}{}{}{}", row("a", "x", "y", "win1"), row("b", "y", "z", "Draw"), row("c", "z", "x", "2"));
        let loaded = read_csv(text.as_bytes()).unwrap();
        assert_eq!(loaded.dataset.len(), 3);
        assert_eq!(loaded.names.teams.len(), 3);
        assert_eq!(loaded.names.players.len(), 15);
        assert_eq!(loaded.dataset.records()[1].outcome, Outcome::Draw);
    }

    #[test]
    fn four_players_names_the_row() {
        let bad = row("b", "y", "z", "win1").replacen("y_p5", "", 1);
        let text = format!("{HEADER}{}{bad}", row("a", "x", "y", "win1"));
        let err = read_csv(text.as_bytes()).unwrap_err().to_string();
        assert!(err.starts_with("row 2:"), "{err}");
        assert!(err.contains("4 players"), "{err}");
    }

    #[test]
    fn bad_outcome_and_duplicates() {
        let text = format!("{HEADER}{}", row("a", "x", "y", "lose"));
        assert!(read_csv(text.as_bytes()).unwrap_err().to_string().contains("unknown outcome"));
        let text = format!("{HEADER}{}{}", row("a", "x", "y", "win1"), row("a", "x", "z", "win1"));
        let err = read_csv(text.as_bytes()).unwrap_err().to_string();
        assert!(err.starts_with("row 2:") && err.contains("duplicate"), "{err}");
        let text = format!("{HEADER}{}", row("a", "x", "x", "win1"));
        assert!(read_csv(text.as_bytes()).is_err());
    }

    #[test]
    fn short_row_is_reported() {
        let text = format!("{HEADER}a,x,y,1,2,3\n");
        let err = read_csv(text.as_bytes()).unwrap_err().to_string();
        assert!(err.starts_with("row 1:"), "{err}");
    }

    #[test]
    fn csv_and_jsonl_round_trip() {
        let text = format!("{HEADER}{}{}", row("a", "x", "y", "win1"), row("b", "y", "z", "draw"));
        let loaded = read_csv(text.as_bytes()).unwrap();
        let mut out = Vec::new();
        write_csv(&mut out, &loaded.dataset, &loaded.names).unwrap();
        assert_eq!(String::from_utf8(out.clone()).unwrap(), text);
        let mut lines = Vec::new();
        write_jsonl(&mut lines, &loaded.dataset, &loaded.names).unwrap();
        let back = read_jsonl(lines.as_slice()).unwrap();
        assert_eq!(back, loaded);
    }

    #[test]
    fn jsonl_accepts_numeric_ids() {
        let line = r#"{"match_id":7,"team1":1,"team2":2,"p1_1":"a","p1_2":"b","p1_3":"c","p1_4":"d","p1_5":"e","p2_1":"f","p2_2":"g","p2_3":"h","p2_4":"i","p2_5":"j","outcome":"win2","timestamp":5}"#;
        let loaded = read_jsonl(format!("{line}\n\n").as_bytes()).unwrap();
        assert_eq!(loaded.names.match_name(MatchId(0)), "7");
        let err = read_jsonl(format!("{line}\n{{}}\n").as_bytes()).unwrap_err().to_string();
        assert!(err.starts_with("row 2:"), "{err}");
    }
}
