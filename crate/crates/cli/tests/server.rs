use axum::body::{to_bytes, Body};
use axum::http::{Method, Request, StatusCode};
use axum::Router;
use caylink_cli::report::{self, Algo, Endpoint, Selector};
use caylink_cli::server::{router, AppState};
use caylink_cli::{load_text, LinkageDocument};
use serde_json::{json, Value};
use tower::ServiceExt;

fn nested(k: usize) -> String {
    report::fixture(k, 1e-5).unwrap().0.to_json()
}

fn four_bar() -> String {
    std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/tests/data/four_bar.json")).unwrap()
}

fn runtime() -> tokio::runtime::Runtime {
    tokio::runtime::Builder::new_multi_thread().worker_threads(2).build().unwrap()
}

async fn call(app: &Router, method: Method, uri: &str, body: Option<String>) -> (StatusCode, Value) {
    let req = Request::builder()
        .method(method)
        .uri(uri)
        .header("content-type", "application/json")
        .body(body.map(Body::from).unwrap_or_else(Body::empty))
        .unwrap();
    let res = app.clone().oneshot(req).await.unwrap();
    let status = res.status();
    let bytes = to_bytes(res.into_body(), usize::MAX).await.unwrap();
    (status, serde_json::from_slice(&bytes).unwrap_or(Value::Null))
}

async fn upload(app: &Router, doc: String) -> String {
    let (s, v) = call(app, Method::POST, "/linkage", Some(doc)).await;
    assert_eq!(s, StatusCode::OK, "{v}");
    v["id"].as_str().unwrap().to_string()
}

fn dist(points: &Value, a: &str, b: &str) -> f64 {
    let p = |v: &str| (points[v][0].as_f64().unwrap(), points[v][1].as_f64().unwrap());
    let (x, y) = (p(a), p(b));
    (x.0 - y.0).hypot(x.1 - y.1)
}

/// Drops the wall-clock field so reports can be compared.
fn untimed(mut v: Value) -> Value {
    if let Some(o) = v.as_object_mut() {
        o.remove("timingMs");
    }
    v
}

#[test]
fn upload_returns_the_hash_and_check() {
    runtime().block_on(async {
        let app = router(AppState::new(None));
        let doc = nested(2);
        let (s, v) = call(&app, Method::POST, "/linkage", Some(doc.clone())).await;
        assert_eq!(s, StatusCode::OK);
        assert_eq!(v["id"], LinkageDocument::parse(&doc).unwrap().hash());
        assert_eq!(v["check"]["lowCayleyComplexity"], true);
        assert_eq!(v["check"]["onePath"], true);
        // the same document again names the same entry
        assert_eq!(upload(&app, doc).await, v["id"].as_str().unwrap());
    });
}

#[test]
fn realize_inside_and_outside_the_space() {
    runtime().block_on(async {
        let app = router(AppState::new(None));
        let id = upload(&app, nested(2)).await;
        let (s, v) = call(&app, Method::GET, &format!("/realize?id={id}&lf=7.2&sigma=-%2B%2B"), None).await;
        assert_eq!(s, StatusCode::OK, "{v}");
        assert!((dist(&v["points"], "1", "3") - 7.2).abs() < 1e-12);
        assert!((dist(&v["points"], "2", "5") - 0.2680224479594946).abs() < 1e-9);
        // l(2,4) at the start of the space is the extreme value of the last quadrilateral
        let lo = pairs(&call(&app, Method::GET, &format!("/space?id={id}"), None).await.1["union"])[0].0;
        let (_, v) = call(&app, Method::GET, &format!("/realize?id={id}&lf={lo}&sigma=-%2B%2B"), None).await;
        assert!((dist(&v["points"], "2", "4") - (8.631888552040508 - 0.2680224479594946)).abs() < 1e-6, "{v}");

        let (s, v) = call(&app, Method::GET, &format!("/realize?id={id}&lf=9&sigma=-%2B%2B"), None).await;
        assert_eq!(s, StatusCode::UNPROCESSABLE_ENTITY);
        assert_eq!(v["error"], "TriangleViolation");
        let (s, v) = call(&app, Method::GET, &format!("/realize?id={id}&lf=7.2&sigma=%2B"), None).await;
        assert_eq!(s, StatusCode::BAD_REQUEST, "{v}");
        let (s, _) = call(&app, Method::GET, &format!("/realize?id={id}&sigma=%2B"), None).await;
        assert_eq!(s, StatusCode::BAD_REQUEST);
    });
}

fn pairs(v: &Value) -> Vec<(f64, f64)> {
    v.as_array().unwrap().iter().map(|i| (i["lo"].as_f64().unwrap(), i["hi"].as_f64().unwrap())).collect()
}

#[test]
fn motion_endpoint() {
    runtime().block_on(async {
        let app = router(AppState::new(None));
        let id = upload(&app, nested(2)).await;
        let same = json!({ "id": id, "from": { "lf": 7.2, "sigma": "-++" }, "to": { "lf": 7.2, "sigma": "-++" } });
        let (s, v) = call(&app, Method::POST, "/motion", Some(same.to_string())).await;
        assert_eq!(s, StatusCode::OK, "{v}");
        assert_eq!(v["case"], "1");
        let legs = v["paths"][0]["legs"].as_array().unwrap();
        assert_eq!(legs.len(), 1);
        assert_eq!(legs[0]["from"], legs[0]["to"]);

        let gap = json!({ "id": id, "from": { "lf": 7.2, "sigma": "-++" }, "to": { "lf": 8.0, "sigma": "-++" } });
        let (_, v) = call(&app, Method::POST, "/motion", Some(gap.to_string())).await;
        assert_eq!(v["case"], "2b");
        assert_eq!(v["paths"].as_array().unwrap().len(), 0);

        let fb = upload(&app, four_bar()).await;
        let req = json!({ "id": fb, "from": { "lf": 3.0, "sigma": "++" }, "to": { "lf": 3.0, "sigma": "-+" }, "animate": 4 });
        let (_, v) = call(&app, Method::POST, "/motion", Some(req.to_string())).await;
        assert_eq!(v["case"], "3a");
        assert_eq!(v["paths"].as_array().unwrap().len(), 2);
        assert_eq!(v["frames"].as_array().unwrap().len(), 2);

        let bad = json!({ "id": id, "from": { "lf": 7.2 }, "to": { "lf": 7.2, "sigma": "-++" } });
        let (s, _) = call(&app, Method::POST, "/motion", Some(bad.to_string())).await;
        assert_eq!(s, StatusCode::BAD_REQUEST);
    });
}

#[test]
fn unknown_ids_and_bad_documents() {
    runtime().block_on(async {
        let app = router(AppState::new(None));
        let (s, v) = call(&app, Method::GET, "/space?id=feed", None).await;
        assert_eq!(s, StatusCode::NOT_FOUND);
        assert_eq!(v["error"], "UnknownDocument");
        let (s, _) = call(&app, Method::POST, "/motion", Some(json!({ "id": "feed", "from": {"lf": 1.0, "sigma": "+"}, "to": {"lf": 1.0, "sigma": "+"} }).to_string())).await;
        assert_eq!(s, StatusCode::NOT_FOUND);
        let (s, v) = call(&app, Method::POST, "/linkage", Some("{\"schemaVersion\": 1}".into())).await;
        assert_eq!(s, StatusCode::BAD_REQUEST);
        assert_eq!(v["error"], "ParseError");
        let neg = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/tests/data/negative_length.json")).unwrap();
        let (s, v) = call(&app, Method::POST, "/linkage", Some(neg)).await;
        assert_eq!(s, StatusCode::BAD_REQUEST);
        assert!(v["message"].as_str().unwrap().contains("edges[1]"), "{v}");
        let (s, v) = call(&app, Method::GET, "/", None).await;
        assert_eq!(s, StatusCode::OK);
        assert!(v["endpoints"].is_array());
    });
}

#[test]
fn curve_endpoint_requires_low_complexity() {
    runtime().block_on(async {
        let app = router(AppState::new(None));
        let id = upload(&app, nested(2)).await;
        let (s, v) = call(&app, Method::GET, &format!("/curve?id={id}&resolution=20&probe=true"), None).await;
        assert_eq!(s, StatusCode::OK, "{v}");
        assert_eq!(v["injectivity"]["violations"], 0);
        let prism = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/tests/data/prism_extreme.json")).unwrap();
        let pid = upload(&app, prism).await;
        let (s, v) = call(&app, Method::GET, &format!("/curve?id={pid}"), None).await;
        assert_eq!(s, StatusCode::UNPROCESSABLE_ENTITY);
        assert_eq!(v["error"], "NotSupported");
    });
}

#[test]
fn service_matches_the_report_functions() {
    runtime().block_on(async {
        let app = router(AppState::new(None));
        for doc in [nested(2), nested(3), four_bar()] {
            let loaded = load_text(&doc).unwrap();
            let id = upload(&app, doc).await;

            for (algo, ty, a, sel) in [
                ("elr", "all", Algo::Elr, Selector::AllTypes),
                ("qim", "all", Algo::Qim, Selector::AllTypes),
            ] {
                let (s, v) = call(&app, Method::GET, &format!("/space?id={id}&algo={algo}&type={ty}"), None).await;
                match report::space(&loaded, a, &sel, false) {
                    Ok(direct) => assert_eq!(untimed(v), untimed(serde_json::to_value(direct).unwrap()), "{algo}"),
                    // QIM needs a 1-path construction; the four-bar has two paths
                    Err(e) => {
                        assert_eq!(s, StatusCode::BAD_REQUEST);
                        assert_eq!(v["error"], e.name());
                    }
                }
            }

            let lo = report::space(&loaded, Algo::Elr, &Selector::AllTypes, false).unwrap();
            let t = &lo.types[0];
            let mid = 0.5 * (t.intervals[0].lo + t.intervals[0].hi);
            let sigma = t.sigma.replace('+', "%2B");
            let (_, v) = call(&app, Method::GET, &format!("/realize?id={id}&lf={mid}&sigma={sigma}"), None).await;
            assert_eq!(v, serde_json::to_value(report::realize_at(&loaded, mid, &t.sigma).unwrap()).unwrap());

            let from = Endpoint::Config { lf: mid, sigma: t.sigma.clone() };
            let to = Endpoint::Config { lf: mid, sigma: lo.types[lo.types.len() - 1].sigma.clone() };
            let req = json!({ "id": id, "from": from, "to": to });
            let (_, v) = call(&app, Method::POST, "/motion", Some(req.to_string())).await;
            assert_eq!(v, serde_json::to_value(report::motion(&loaded, &from, &to, None).unwrap()).unwrap());

            let (_, v) = call(&app, Method::GET, &format!("/curve?id={id}&resolution=15"), None).await;
            assert_eq!(v, serde_json::to_value(report::curve(&loaded, 15, false).unwrap()).unwrap());
        }
    });
}
