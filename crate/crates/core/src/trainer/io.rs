//! File-backed training sink: streams the metrics CSV row by row and
//! writes cadence checkpoints.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use crate::ddpg::{ActorCriticBundle, Checkpoint};
use crate::trainer::config::TrainError;
use crate::trainer::metrics::{metrics_csv_header, metrics_csv_row, EpisodeMetrics};
use crate::trainer::train::TrainSink;

fn io_err(path: &Path, e: std::io::Error) -> TrainError {
    TrainError::Io(format!("{}: {e}", path.display()))
}

/// Write one checkpoint per bundle: `checkpoint.json` for shared
/// algorithms, `checkpoint_agent{i}.json` per agent for independent
/// training. Returns the written paths.
pub fn write_checkpoints(
    out_dir: &Path,
    behavior_tag: &str,
    bundles: &[ActorCriticBundle],
    suffix: &str,
) -> Result<Vec<PathBuf>, TrainError> {
    let mut paths = Vec::new();
    for (i, bundle) in bundles.iter().enumerate() {
        let name = if bundles.len() == 1 {
            format!("checkpoint{suffix}.json")
        } else {
            format!("checkpoint_agent{i}{suffix}.json")
        };
        let path = out_dir.join(name);
        Checkpoint::from_bundle(behavior_tag, bundle).save(&path)?;
        paths.push(path);
    }
    Ok(paths)
}

/// Streams `metrics.csv` and cadence checkpoints into a run directory.
pub struct FileSink {
    out_dir: PathBuf,
    behavior_tag: String,
    checkpoint_every: usize,
    metrics_path: PathBuf,
    writer: BufWriter<File>,
    wrote_header: bool,
    pub artifacts: Vec<PathBuf>,
}

impl FileSink {
    pub fn create(
        out_dir: &Path,
        behavior_tag: &str,
        checkpoint_every: usize,
    ) -> Result<Self, TrainError> {
        std::fs::create_dir_all(out_dir).map_err(|e| io_err(out_dir, e))?;
        let metrics_path = out_dir.join("metrics.csv");
        let writer = BufWriter::new(File::create(&metrics_path).map_err(|e| io_err(&metrics_path, e))?);
        Ok(FileSink {
            out_dir: out_dir.to_path_buf(),
            behavior_tag: behavior_tag.to_string(),
            checkpoint_every,
            metrics_path: metrics_path.clone(),
            writer,
            wrote_header: false,
            artifacts: vec![metrics_path],
        })
    }

    /// Flush the metrics stream and write the final checkpoints.
    pub fn finalize(mut self, bundles: &[ActorCriticBundle]) -> Result<Vec<PathBuf>, TrainError> {
        // Zero-episode runs still get a header line.
        if !self.wrote_header {
            // Unknown agent count; write a minimal header for n = 0.
            self.writer
                .write_all(metrics_csv_header(0).as_bytes())
                .and_then(|_| self.writer.write_all(b"\n"))
                .map_err(|e| io_err(&self.metrics_path, e))?;
        }
        self.writer
            .flush()
            .map_err(|e| io_err(&self.metrics_path, e))?;
        let paths = write_checkpoints(&self.out_dir, &self.behavior_tag, bundles, "")?;
        self.artifacts.extend(paths.iter().cloned());
        Ok(paths)
    }
}

impl TrainSink for FileSink {
    fn on_episode(
        &mut self,
        metrics: &EpisodeMetrics,
        bundles: &[ActorCriticBundle],
    ) -> Result<(), TrainError> {
        if !self.wrote_header {
            self.writer
                .write_all(metrics_csv_header(metrics.n_agents()).as_bytes())
                .and_then(|_| self.writer.write_all(b"\n"))
                .map_err(|e| io_err(&self.metrics_path, e))?;
            self.wrote_header = true;
        }
        self.writer
            .write_all(metrics_csv_row(metrics).as_bytes())
            .and_then(|_| self.writer.write_all(b"\n"))
            .map_err(|e| io_err(&self.metrics_path, e))?;
        if self.checkpoint_every > 0 && (metrics.episode + 1) % self.checkpoint_every == 0 {
            let suffix = format!("_ep{}", metrics.episode + 1);
            let mut paths =
                write_checkpoints(&self.out_dir, &self.behavior_tag, bundles, &suffix)?;
            self.artifacts.append(&mut paths);
        }
        Ok(())
    }
}
