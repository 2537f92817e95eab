// Wire types mirroring the server's JSON contract (see docs/schemas.md in
// the backend repo). Unpocketed random events never arrive with a label or
// body: balls only carry a display hint.
export {};
