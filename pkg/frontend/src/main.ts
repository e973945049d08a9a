import { startApp } from "./app.js";

const root = document.getElementById("app");
if (root) {
  const params = new URLSearchParams(window.location.search);
  void startApp(root, params.get("api") ?? "", params.get("session") ?? undefined);
}
