//! A long-lived SMT-LIB 2 solver process per logic, one `(push)`/`(pop)`
//! scope per query.

use std::collections::BTreeMap;
use std::fs::File;
use std::io::{BufRead, BufReader, Write};
use std::path::Path;
use std::process::{Child, ChildStdin, Command, Stdio};
use std::sync::mpsc::{self, Receiver, RecvTimeoutError};
use std::thread;
use std::time::Duration;

use lcstrs_core::solver::{Logic, RawAnswer, SmtBackend, SmtQuery, Solver, SolverConfig};
use thiserror::Error;

/// Extra time granted to the process beyond its own timeout before the
/// session is killed.
const GRACE: Duration = Duration::from_millis(1000);

#[derive(Debug, Error)]
pub enum SmtError {
    #[error("empty solver command")]
    EmptyCommand,
    #[error("cannot start solver `{cmd}`: {source}")]
    Spawn { cmd: String, source: std::io::Error },
    #[error("cannot open SMT log {path}: {source}")]
    Log { path: String, source: std::io::Error },
}

struct Session {
    child: Child,
    stdin: ChildStdin,
    lines: Receiver<String>,
}

impl Session {
    fn send(&mut self, text: &str) -> std::io::Result<()> {
        self.stdin.write_all(text.as_bytes())?;
        self.stdin.flush()
    }

    fn line(&self, wait: Duration) -> Result<String, &'static str> {
        match self.lines.recv_timeout(wait) {
            Ok(l) => Ok(l),
            Err(RecvTimeoutError::Timeout) => Err("timeout"),
            Err(RecvTimeoutError::Disconnected) => Err("solver exited"),
        }
    }

    /// Reads lines until parentheses balance.
    fn sexp(&self, wait: Duration) -> Result<String, &'static str> {
        let mut text = String::new();
        let mut depth = 0i64;
        loop {
            let l = self.line(wait)?;
            let mut quoted = false;
            for c in l.chars() {
                match c {
                    '|' => quoted = !quoted,
                    '(' if !quoted => depth += 1,
                    ')' if !quoted => depth -= 1,
                    _ => {}
                }
            }
            text.push_str(&l);
            text.push('\n');
            if depth <= 0 {
                return Ok(text);
            }
        }
    }
}

impl Drop for Session {
    fn drop(&mut self) {
        let _ = self.child.kill();
        let _ = self.child.wait();
    }
}

/// Talks to an external solver such as `z3 -in`.
pub struct ProcessBackend {
    program: String,
    args: Vec<String>,
    timeout_ms: u64,
    sessions: BTreeMap<Logic, Session>,
    log: Option<File>,
}

impl ProcessBackend {
    /// `config.executable` is split on whitespace into program and
    /// arguments; a bare `z3` gets `-in -smt2`.
    pub fn new(config: &SolverConfig) -> Result<ProcessBackend, SmtError> {
        let mut words = config.executable.split_whitespace().map(str::to_string);
        let program = words.next().ok_or(SmtError::EmptyCommand)?;
        let mut args: Vec<String> = words.collect();
        if args.is_empty() && is_z3(&program) {
            args = vec!["-in".into(), "-smt2".into()];
        }
        Ok(ProcessBackend { program, args, timeout_ms: config.timeout_ms, sessions: BTreeMap::new(), log: None })
    }

    pub fn log_to(mut self, path: &Path) -> Result<ProcessBackend, SmtError> {
        let f = File::create(path).map_err(|source| SmtError::Log { path: path.display().to_string(), source })?;
        self.log = Some(f);
        Ok(self)
    }

    /// Starts a session so that a missing executable is reported early.
    pub fn probe(&mut self) -> Result<(), SmtError> {
        self.session(Logic::QfLia).map(|_| ())
    }

    fn log(&mut self, text: &str) {
        if let Some(f) = &mut self.log {
            let _ = f.write_all(text.as_bytes());
        }
    }

    fn spawn(&self, logic: Logic) -> Result<Session, SmtError> {
        let cmd = || format!("{} {}", self.program, self.args.join(" "));
        let mut child = Command::new(&self.program)
            .args(&self.args)
            .stdin(Stdio::piped())
            .stdout(Stdio::piped())
            .stderr(Stdio::null())
            .spawn()
            .map_err(|source| SmtError::Spawn { cmd: cmd(), source })?;
        let stdin = child.stdin.take().expect("piped");
        let stdout = child.stdout.take().expect("piped");
        let (tx, rx) = mpsc::channel();
        thread::spawn(move || {
            for line in BufReader::new(stdout).lines() {
                let Ok(line) = line else { break };
                if line.trim().is_empty() {
                    continue;
                }
                if tx.send(line).is_err() {
                    break;
                }
            }
        });
        let mut s = Session { child, stdin, lines: rx };
        let mut preamble = String::from("(set-option :print-success false)\n(set-option :produce-models true)\n");
        if is_z3(&self.program) {
            preamble.push_str(&format!("(set-option :timeout {})\n", self.timeout_ms));
        }
        preamble.push_str(&format!("(set-logic {})\n", logic.as_str()));
        s.send(&preamble).map_err(|source| SmtError::Spawn { cmd: cmd(), source })?;
        Ok(s)
    }

    fn session(&mut self, logic: Logic) -> Result<&mut Session, SmtError> {
        if !self.sessions.contains_key(&logic) {
            let s = self.spawn(logic)?;
            self.log(&format!("; session {}\n", logic.as_str()));
            self.sessions.insert(logic, s);
        }
        Ok(self.sessions.get_mut(&logic).expect("inserted"))
    }

    fn ask(&mut self, q: &SmtQuery) -> Result<RawAnswer, String> {
        let wait = Duration::from_millis(self.timeout_ms) + GRACE;
        let mut script = String::from("(push 1)\n");
        for (n, s) in &q.declarations {
            script.push_str(&format!("(declare-const {n} {s})\n"));
        }
        script.push_str(&format!("(assert {})\n(check-sat)\n", q.assertion));
        self.log(&script);
        let s = self.session(q.logic).map_err(|e| e.to_string())?;
        s.send(&script).map_err(|e| e.to_string())?;
        let status = s.line(wait)?;
        let names: Vec<&str> = q.names().collect();
        let answer = match status.trim() {
            "sat" if names.is_empty() => RawAnswer::Sat("()".into()),
            "sat" => {
                s.send(&format!("(get-value ({}))\n", names.join(" "))).map_err(|e| e.to_string())?;
                RawAnswer::Sat(s.sexp(wait)?.trim().to_string())
            }
            "unsat" => RawAnswer::Unsat,
            "unknown" | "timeout" => RawAnswer::Unknown(status.trim().to_string()),
            other => return Err(format!("unexpected solver reply: {other}")),
        };
        s.send("(pop 1)\n").map_err(|e| e.to_string())?;
        let shown = match &answer {
            RawAnswer::Sat(m) => format!("; sat {m}\n"),
            RawAnswer::Unsat => "; unsat\n".into(),
            RawAnswer::Unknown(r) => format!("; unknown {r}\n"),
        };
        self.log(&shown);
        self.log("(pop 1)\n");
        Ok(answer)
    }
}

fn is_z3(program: &str) -> bool {
    Path::new(program).file_name().and_then(|n| n.to_str()).is_some_and(|n| n.starts_with("z3"))
}

impl SmtBackend for ProcessBackend {
    fn check(&mut self, query: &SmtQuery) -> RawAnswer {
        match self.ask(query) {
            Ok(a) => a,
            Err(reason) => {
                self.sessions.remove(&query.logic);
                self.log(&format!("; error {reason}\n"));
                RawAnswer::Unknown(reason)
            }
        }
    }
}

/// A solver backed by a process, optionally logging every exchange.
pub fn process_solver(config: &SolverConfig, log: Option<&Path>) -> Result<Solver, SmtError> {
    let mut backend = ProcessBackend::new(config)?;
    if let Some(p) = log {
        backend = backend.log_to(p)?;
    }
    backend.probe()?;
    Ok(Solver::new(Box::new(backend)).with_logic(config.logic))
}

#[cfg(test)]
mod tests {
    use lcstrs_core::kernel::{build, Term, Type, Var};
    use lcstrs_core::solver::{Entailment, SolverVerdict};

    use super::*;

    fn x() -> Term {
        Term::var(Var::new("x", Type::int()))
    }

    #[test]
    fn answers_and_reuses_sessions() {
        let mut s = process_solver(&SolverConfig::default(), None).unwrap();
        let phi = build::and(build::gt(x(), Term::int(3)), build::lt(x(), Term::int(5)));
        match s.check_sat(&phi).unwrap() {
            SolverVerdict::Sat(m) => assert_eq!(m.values().next().unwrap().to_term(), Term::int(4)),
            other => panic!("{other:?}"),
        }
        let nonlinear = build::eq(build::mul(x(), x()), Term::int(2));
        assert_eq!(s.check_sat(&nonlinear).unwrap(), SolverVerdict::Unsat);
        let e = s.check_entailment(&build::gt(x(), Term::int(0)), &build::ge(x(), Term::int(1))).unwrap();
        assert_eq!(e, Entailment::Valid);
    }

    #[test]
    fn missing_executable_is_reported() {
        let cfg = SolverConfig::new("/nonexistent/solver", 100).unwrap();
        assert!(matches!(process_solver(&cfg, None), Err(SmtError::Spawn { .. })));
    }

    #[test]
    fn a_dead_process_gives_unknown() {
        // `true` exits immediately without answering
        let cfg = SolverConfig::new("true --ignored", 200).unwrap();
        let mut backend = ProcessBackend::new(&cfg).unwrap();
        let q = SmtQuery { logic: Logic::QfLia, declarations: vec![], assertion: "true".into() };
        assert!(matches!(backend.check(&q), RawAnswer::Unknown(_)));
    }
}
