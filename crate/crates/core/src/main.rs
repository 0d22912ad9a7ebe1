use std::process::ExitCode;

fn main() -> ExitCode {
    let r = netcurv::cli::dispatch(std::env::args_os());
    if let Some(report) = &r.stdout {
        print!("{report}");
        eprintln!("{}", r.summary);
    } else if r.code == netcurv::cli::EXIT_OK {
        println!("{}", r.summary.trim_end());
    } else {
        eprintln!("{}", r.summary.trim_end());
    }
    ExitCode::from(r.code as u8)
}
