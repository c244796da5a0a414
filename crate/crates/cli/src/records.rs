use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use lmmaes::problems::{BiObjectiveProblem, ProblemDescriptor, SingleObjectiveProblem};
use lmmaes::strategies::Sampling;
use serde::{Deserialize, Serialize};

use crate::config::{ExperimentConfig, Format};
use crate::error::{CliError, Result};

/// One log line of a run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub run: usize,
    pub seed: u64,
    pub evaluations: u64,
    /// Best fitness `f - f*` (single) or dominated hypervolume (multi).
    pub quality: f64,
    /// Hypervolume gap; empty in single mode.
    pub gap: Option<f64>,
    /// Elapsed wall time. Zero unless timing was requested, so that logs stay reproducible.
    pub wall_ms: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "kebab-case")]
pub enum ProblemHeader {
    Single { problem: SingleObjectiveProblem },
    Multi { descriptor: ProblemDescriptor },
}

impl ProblemHeader {
    /// Rebuilds the bi-objective problem, checking it against the stored descriptor.
    pub fn rebuild_biobjective(&self) -> Result<Option<BiObjectiveProblem>> {
        match self {
            ProblemHeader::Single { .. } => Ok(None),
            ProblemHeader::Multi { descriptor } => Ok(Some(BiObjectiveProblem::from_descriptor(descriptor)?)),
        }
    }
}

/// Initial conditions, recorded because they are defaults rather than problem data.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StrategyHeader {
    pub initial_point: String,
    pub sigma0: f64,
    pub sampling: Option<Sampling>,
}

/// Everything needed to interpret and reproduce one output stream.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LogHeader {
    pub config: ExperimentConfig,
    pub dimension: usize,
    pub problem: ProblemHeader,
    pub strategy: StrategyHeader,
}

/// Destination of record streams, one stream per dimension.
pub trait RecordSink {
    fn begin(&mut self, header: &LogHeader) -> Result<()>;
    fn record(&mut self, record: &RunRecord) -> Result<()>;
    fn finish(&mut self) -> Result<()>;
}

/// Collects streams in memory.
#[derive(Debug, Default)]
pub struct MemorySink {
    pub streams: Vec<(LogHeader, Vec<RunRecord>)>,
}

impl RecordSink for MemorySink {
    fn begin(&mut self, header: &LogHeader) -> Result<()> {
        self.streams.push((header.clone(), Vec::new()));
        Ok(())
    }

    fn record(&mut self, record: &RunRecord) -> Result<()> {
        let (_, records) = self.streams.last_mut().ok_or_else(|| CliError::usage("record before stream start"))?;
        records.push(record.clone());
        Ok(())
    }

    fn finish(&mut self) -> Result<()> {
        Ok(())
    }
}

/// Writes CSV or JSON lines to any writer, flushing after each record.
pub struct StreamWriter<W: Write> {
    format: Format,
    out: W,
}

const CSV_COLUMNS: &str = "run,seed,evaluations,quality,gap,wall_ms";

impl<W: Write> StreamWriter<W> {
    pub fn new(mut out: W, format: Format, header: &LogHeader) -> Result<Self> {
        let io = |e| CliError::io("output stream", e);
        match format {
            Format::Csv => {
                writeln!(out, "# config {}", serde_json::to_string(&header.config)?).map_err(io)?;
                writeln!(out, "# dimension {}", header.dimension).map_err(io)?;
                writeln!(out, "# problem {}", serde_json::to_string(&header.problem)?).map_err(io)?;
                writeln!(out, "# strategy {}", serde_json::to_string(&header.strategy)?).map_err(io)?;
                writeln!(out, "{CSV_COLUMNS}").map_err(io)?;
            }
            Format::Jsonl => {
                writeln!(out, "{}", serde_json::json!({ "header": header })).map_err(io)?;
            }
        }
        out.flush().map_err(io)?;
        Ok(Self { format, out })
    }

    pub fn write(&mut self, record: &RunRecord) -> Result<()> {
        let io = |e| CliError::io("output stream", e);
        match self.format {
            Format::Csv => {
                let mut line = csv::WriterBuilder::new().has_headers(false).from_writer(Vec::new());
                line.serialize(record)?;
                let bytes = line.into_inner().map_err(|e| CliError::io("output stream", e.into_error()))?;
                self.out.write_all(&bytes).map_err(io)?;
            }
            Format::Jsonl => writeln!(self.out, "{}", serde_json::to_string(record)?).map_err(io)?,
        }
        self.out.flush().map_err(io)
    }

    pub fn into_inner(self) -> W {
        self.out
    }
}

/// One file per dimension. With several dimensions `_n<dim>` is inserted before the extension.
pub struct FileSink {
    path: PathBuf,
    format: Format,
    multiple: bool,
    current: Option<StreamWriter<BufWriter<File>>>,
    pub written: Vec<PathBuf>,
}

impl FileSink {
    pub fn new(path: PathBuf, format: Format, dimensions: usize) -> Self {
        Self { path, format, multiple: dimensions > 1, current: None, written: Vec::new() }
    }

    fn path_for(&self, n: usize) -> PathBuf {
        if !self.multiple {
            return self.path.clone();
        }
        let stem = self.path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
        let name = match self.path.extension() {
            Some(ext) => format!("{stem}_n{n}.{}", ext.to_string_lossy()),
            None => format!("{stem}_n{n}"),
        };
        self.path.with_file_name(name)
    }
}

impl RecordSink for FileSink {
    fn begin(&mut self, header: &LogHeader) -> Result<()> {
        self.finish()?;
        let path = self.path_for(header.dimension);
        if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
            std::fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
        }
        let file = File::create(&path).map_err(|e| CliError::io(&path, e))?;
        self.current = Some(StreamWriter::new(BufWriter::new(file), self.format, header)?);
        self.written.push(path);
        Ok(())
    }

    fn record(&mut self, record: &RunRecord) -> Result<()> {
        self.current.as_mut().ok_or_else(|| CliError::usage("record before stream start"))?.write(record)
    }

    fn finish(&mut self) -> Result<()> {
        if let Some(w) = self.current.take() {
            w.into_inner().flush().map_err(|e| CliError::io(&self.path, e))?;
        }
        Ok(())
    }
}

/// Reads a stream written by [`StreamWriter`]; the format is detected from the first line.
pub fn read_stream(path: &Path) -> Result<(LogHeader, Vec<RunRecord>)> {
    let file = File::open(path).map_err(|e| CliError::io(path, e))?;
    let reader = BufReader::new(file);
    let mut lines = reader.lines();
    let first = match lines.next() {
        Some(line) => line.map_err(|e| CliError::io(path, e))?,
        None => return Err(CliError::usage(format!("{} is empty", path.display()))),
    };
    let bad = |what: &str| CliError::usage(format!("{}: {what}", path.display()));
    if first.starts_with('{') {
        #[derive(Deserialize)]
        struct Wrapped {
            header: LogHeader,
        }
        let header = serde_json::from_str::<Wrapped>(&first).map_err(|_| bad("missing header line"))?.header;
        let mut records = Vec::new();
        for line in lines {
            let line = line.map_err(|e| CliError::io(path, e))?;
            if !line.trim().is_empty() {
                records.push(serde_json::from_str(&line)?);
            }
        }
        return Ok((header, records));
    }
    let mut config = None;
    let mut dimension = None;
    let mut problem = None;
    let mut strategy = None;
    let mut body = String::new();
    for line in std::iter::once(Ok(first)).chain(lines) {
        let line = line.map_err(|e| CliError::io(path, e))?;
        if let Some(rest) = line.strip_prefix("# config ") {
            config = Some(serde_json::from_str(rest)?);
        } else if let Some(rest) = line.strip_prefix("# dimension ") {
            dimension = Some(rest.trim().parse().map_err(|_| bad("bad dimension line"))?);
        } else if let Some(rest) = line.strip_prefix("# problem ") {
            problem = Some(serde_json::from_str(rest)?);
        } else if let Some(rest) = line.strip_prefix("# strategy ") {
            strategy = Some(serde_json::from_str(rest)?);
        } else if !line.starts_with('#') {
            body.push_str(&line);
            body.push('\n');
        }
    }
    let header = LogHeader {
        config: config.ok_or_else(|| bad("missing config header"))?,
        dimension: dimension.ok_or_else(|| bad("missing dimension header"))?,
        problem: problem.ok_or_else(|| bad("missing problem header"))?,
        strategy: strategy.ok_or_else(|| bad("missing strategy header"))?,
    };
    let mut reader = csv::Reader::from_reader(body.as_bytes());
    let records = reader.deserialize().collect::<std::result::Result<Vec<RunRecord>, _>>()?;
    Ok((header, records))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::ProblemRef;
    use lmmaes::problems::make_biobjective;

    fn header(format_problem: u32) -> LogHeader {
        let problem = make_biobjective(format_problem, 6, 1e3, 3).unwrap();
        LogHeader {
            config: ExperimentConfig::new(ProblemRef::Multi(format_problem), vec![6]),
            dimension: 6,
            problem: ProblemHeader::Multi { descriptor: problem.descriptor() },
            strategy: StrategyHeader { initial_point: "standard-normal".into(), sigma0: 1.0, sampling: Some(Sampling::Damped) },
        }
    }

    fn records() -> Vec<RunRecord> {
        vec![
            RunRecord { run: 0, seed: 0, evaluations: 10, quality: 12.5, gap: Some(0.1 + 0.2), wall_ms: 0 },
            RunRecord { run: 0, seed: 0, evaluations: 20, quality: 1e-300, gap: None, wall_ms: 3 },
        ]
    }

    #[test]
    fn csv_layout() {
        let mut w = StreamWriter::new(Vec::new(), Format::Csv, &header(1)).unwrap();
        for r in records() {
            w.write(&r).unwrap();
        }
        let text = String::from_utf8(w.into_inner()).unwrap();
        let body: Vec<&str> = text.lines().filter(|l| !l.starts_with('#')).collect();
        assert_eq!(body, vec![CSV_COLUMNS, "0,0,10,12.5,0.30000000000000004,0", "0,0,20,1e-300,,3"]);
    }

    #[test]
    fn streams_round_trip_in_both_formats() {
        let dir = tempfile::tempdir().unwrap();
        for format in [Format::Csv, Format::Jsonl] {
            let path = dir.path().join(format!("out.{format:?}"));
            let mut sink = FileSink::new(path.clone(), format, 1);
            sink.begin(&header(9)).unwrap();
            for r in records() {
                sink.record(&r).unwrap();
            }
            sink.finish().unwrap();
            let (h, rs) = read_stream(&path).unwrap();
            assert_eq!(h, header(9));
            assert_eq!(rs, records());
        }
    }

    #[test]
    fn header_rebuilds_identical_problem() {
        let h = header(9);
        let rebuilt = h.problem.rebuild_biobjective().unwrap().unwrap();
        let original = make_biobjective(9, 6, 1e3, 3).unwrap();
        let x = [0.3, -1.0, 2.0, 0.0, 0.5, 0.25];
        let (a, b) = (rebuilt.eval(&x).unwrap(), original.eval(&x).unwrap());
        assert_eq!(a[0].to_bits(), b[0].to_bits());
        assert_eq!(a[1].to_bits(), b[1].to_bits());
    }

    #[test]
    fn file_names_per_dimension() {
        let sink = FileSink::new(PathBuf::from("res/run.csv"), Format::Csv, 2);
        assert_eq!(sink.path_for(64), PathBuf::from("res/run_n64.csv"));
    }
}
