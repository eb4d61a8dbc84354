use torusbundle::{iso, verify_certificate, IsoVerdict, Sl2Matrix, SlRep, TorusBundle};

fn main() -> Result<(), torusbundle::Error> {
    let t = Sl2Matrix::gen_t();
    let first = TorusBundle::new(SlRep::new(vec![(Sl2Matrix::identity(), t.clone())]), 0, 0)?;
    let second = TorusBundle::new(SlRep::new(vec![(Sl2Matrix::identity(), t.inverse())]), 0, 0)?;

    match iso(&first, &second)? {
        IsoVerdict::Yes(cert) => assert!(verify_certificate(&first, &second, &cert)?),
        IsoVerdict::No(sep) => println!("condition {} separates", sep.condition),
        IsoVerdict::Indeterminate(reason) => println!("blocked: {reason}"),
    }
    Ok(())
}
