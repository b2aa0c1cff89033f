#!/usr/bin/env python3
"""Regenerate the fixture corpus under fixtures/.

Everything is derived from the per-standard reference table below. The
generator is deterministic: running it twice produces identical files.

    python3 tools/gen_fixtures.py [--out fixtures]
"""

import argparse
import csv
import io
import json
import math
import random
import re
from pathlib import Path

TOTAL_ELOC = 75650
CONSERVATIVE_LINES = 37848
AGGRESSIVE_LINES = 53518
POPULATION = 10000
POOLED_AGREEMENT = 0.9674

# name, abbrev, sites using, break rate, agree, cves, high/severe, %eloc, attack papers
REFERENCE = [
    ("WebGL", "WEBGL", 852, "<1%", "93%", 31, 22, "27.43", 4),
    ("HTML: Web Workers", "H-WW", 856, "0%", "100%", 16, 9, "1.63", 2),
    ("WebRTC", "WRTC", 24, "0%", "93%", 15, 4, "2.48", 2),
    ("HTML: The canvas element", "H-C", 6935, "0%", "100%", 14, 6, "5.03", 7),
    ("Scalable Vector Graphics", "SVG", 1516, "0%", "98%", 13, 10, "7.86", 0),
    ("Web Audio API", "WEBA", 148, "0%", "100%", 10, 5, "5.79", 2),
    ("XMLHttpRequest", "AJAX", 7806, "32%", "82%", 11, 4, "1.73", 0),
    ("HTML", "HTML", 8939, "40%", "85%", 6, 2, "0.89", 2),
    ("HTML 5", "HTML5", 6882, "4%", "97%", 5, 2, "5.72", 0),
    ("Service Workers", "SW", 0, "0%", "-", 5, 0, "2.84", 3),
    ("HTML: Web Sockets", "H-WS", 514, "0%", "95%", 5, 3, "0.67", 0),
    ("HTML: History Interface", "H-HI", 1481, "1%", "96%", 5, 1, "1.04", 0),
    ("Indexed Database API", "IDB", 288, "<1%", "100%", 4, 2, "4.73", 2),
    ("Web Cryptography API", "WCR", 7048, "4%", "90%", 4, 3, "0.52", 0),
    ("Media Capture and Streams", "MCS", 49, "0%", "95%", 4, 3, "1.08", 1),
    ("DOM Level 2: HTML", "DOM2-H", 8956, "13%", "89%", 3, 1, "2.09", 0),
    ("DOM Level 2: Traversal and Range", "DOM2-T", 4406, "0%", "100%", 3, 2, "0.04", 0),
    ("HTML 5.1", "HTML51", 2, "0%", "100%", 3, 1, "1.18", 0),
    ("Resource Timing", "RT", 433, "0%", "98%", 3, 0, "0.10", 0),
    ("Fullscreen API", "FULL", 229, "0%", "95%", 3, 1, "0.12", 0),
    ("Beacon", "BE", 2302, "0%", "100%", 2, 0, "0.23", 0),
    ("DOM Level 1", "DOM1", 9113, "63%", "96%", 2, 2, "1.66", 0),
    ("DOM Parsing and Serialization", "DOM-PS", 2814, "0%", "83%", 2, 1, "0.31", 0),
    ("DOM Level 2: Events", "DOM2-E", 9038, "34%", "96%", 2, 0, "0.35", 0),
    ("DOM Level 2: Style", "DOM2-S", 8773, "31%", "93%", 2, 1, "0.69", 0),
    ("Fetch", "F", 63, "<1%", "90%", 2, 0, "1.14", 3),
    ("CSS Object Model", "CSS-OM", 8094, "5%", "94%", 1, 0, "0.17", 1),
    ("DOM", "DOM", 9050, "36%", "94%", 1, 1, "1.29", 0),
    ("HTML: Plugins", "H-P", 92, "0%", "100%", 1, 1, "0.98", 2),
    ("File API", "FA", 1672, "0%", "83%", 1, 0, "1.46", 0),
    ("Gamepad", "GP", 1, "0%", "71%", 1, 1, "0.07", 0),
    ("Geolocation API", "GEO", 153, "0%", "96%", 1, 0, "0.26", 2),
    ("High Resolution Time Level 2", "HRT", 5665, "0%", "100%", 1, 0, "0.02", 8),
    ("HTML: Channel Messaging", "H-CM", 4964, "0%", "97%", 1, 0, "0.40", 2),
    ("Navigation Timing", "NT", 64, "0%", "98%", 1, 0, "0.09", 0),
    ("Web Notifications", "WN", 15, "0%", "100%", 1, 1, "0.82", 0),
    ("Page Visibility (Second Edition)", "PV", 0, "0%", "-", 1, 1, "0.02", 0),
    ("UI Events", "UIE", 1030, "<1%", "100%", 1, 0, "0.47", 0),
    ("Vibration API", "V", 1, "0%", "100%", 1, 1, "0.08", 0),
    ("Console API", "CO", 3, "0%", "100%", 0, 0, "0.59", 1),
    ("CSSOM View Module", "CSS-VM", 4538, "0%", "100%", 0, 0, "2.85", 1),
    ("Battery Status API", "BA", 2317, "0%", "100%", 0, 0, "0.15", 4),
    ("CSS Conditional Rules Module Level 3", "CSS-CR", 416, "0%", "100%", 0, 0, "0.16", 0),
    ("CSS Font Loading Module Level 3", "CSS-FO", 2287, "0%", "98%", 0, 0, "1.24", 2),
    ("DeviceOrientation Event", "DO", 0, "0%", "-", 0, 0, "0.06", 2),
    ("DOM Level 2: Core", "DOM2-C", 8896, "89%", "97%", 0, 0, "0.29", 0),
    ("DOM Level 3: Core", "DOM3-C", 8411, "4%", "96%", 0, 0, "0.25", 0),
    ("DOM Level 3: XPath", "DOM3-X", 364, "1%", "97%", 0, 0, "0.16", 0),
    ("Encrypted Media Extensions", "EME", 9, "0%", "100%", 0, 0, "1.91", 0),
    ("HTML: Web Storage", "H-WB", 7806, "0%", "83%", 0, 0, "0.55", 3),
    ("Media Source Extensions", "MSE", 1240, "0%", "95%", 0, 0, "1.97", 0),
    ("Selectors API Level 1", "SLC", 8611, "15%", "89%", 0, 0, "0.00", 0),
    ("Script-based animation timing control", "TC", 3437, "0%", "100%", 0, 0, "0.08", 1),
    ("Ambient Light Sensor API", "ALS", 18, "0%", "89%", 0, 0, "0.00", 2),
]

# Unlisted rows: 0% break, no CVEs, under 1% ELoC. Weights split the
# remaining lines within each group.
FILLERS = [
    # name, abbrev, sites using, eloc weight, group
    ("Performance Timeline Level 2", "PT2", 190, 1, "conservative"),
    ("execCommand", "EC", 1120, 5, "aggressive"),
    ("HTML: Broadcasting", "H-B", 4, 1, "aggressive"),
    ("Performance Timeline", "PT", 610, 2, "aggressive"),
    ("Pointer Lock", "PL", 2, 2, "aggressive"),
    ("Proximity Events", "PE", 0, 1, "aggressive"),
    ("Selection API", "SEL", 1530, 4, "aggressive"),
    ("The Screen Orientation API", "SO", 11, 2, "aggressive"),
    ("URL", "URL", 340, 3, "aggressive"),
    ("User Timing Level 2", "UT2", 85, 1, "aggressive"),
    ("W3C DOM4", "DOM4", 270, 3, "aggressive"),
    ("WebVTT", "VTT", 0, 5, "none"),
    ("Touch Events", "TE", 720, 4, "none"),
    ("Clipboard API and events", "CLIP", 45, 3, "none"),
    ("Encoding", "ENC", 130, 4, "none"),
    ("Network Information API", "NI", 0, 1, "none"),
    ("Web Speech API", "WSP", 3, 7, "none"),
    ("Web Animations", "WANI", 12, 6, "none"),
    ("HTML Templates", "TMPL", 60, 2, "none"),
    ("MediaStream Recording", "MSR", 4, 5, "none"),
]

CONSERVATIVE = ["BE", "DOM-PS", "FULL", "HRT", "H-WS", "H-CM", "H-WW", "IDB",
                "PT2", "RT", "SVG", "UIE", "WEBA", "WEBGL"]
AGGRESSIVE_ONLY = ["ALS", "BA", "CSS-CR", "CSS-FO", "CSS-VM", "DOM2-T", "EME",
                   "EC", "F", "FA", "GP", "GEO", "H-B", "H-P", "H-HI", "H-WB",
                   "MCS", "MSE", "NT", "PT", "PL", "PE", "SEL", "SO", "TC",
                   "URL", "UT2", "DOM4", "WN", "WRTC"]

# IDL per standard. Interfaces are owned by exactly one standard.
IDL = {
    "WEBGL": """
[Exposed=Window]
interface WebGLRenderingContext {
  readonly attribute long drawingBufferWidth;
  readonly attribute long drawingBufferHeight;
  void bufferData(unsigned long target, any data, unsigned long usage);
  void drawArrays(unsigned long mode, long first, long count);
  WebGLShader? createShader(unsigned long type);
  void texImage2D(unsigned long target, long level, any pixels);
};
interface WebGLShader {
};
""",
    "H-WW": """
interface Worker : EventTarget {
  constructor(DOMString scriptURL);
  void postMessage(any message);
  void terminate();
  attribute EventHandler onmessage;
};
interface WorkerGlobalScope : EventTarget {
  void importScripts(DOMString... urls);
  readonly attribute WorkerLocation location;
};
""",
    "WRTC": """
interface RTCPeerConnection : EventTarget {
  constructor(optional RTCConfiguration configuration);
  Promise<RTCSessionDescriptionInit> createOffer();
  Promise<void> setLocalDescription(RTCSessionDescriptionInit description);
  RTCDataChannel createDataChannel(DOMString label);
  readonly attribute RTCSignalingState signalingState;
  void close();
};
""",
    "H-C": """
interface HTMLCanvasElement : HTMLElement {
  RenderingContext? getContext(DOMString contextId, any... arguments);
  DOMString toDataURL(optional DOMString type);
  attribute unsigned long width;
  attribute unsigned long height;
};
interface CanvasRenderingContext2D {
  void fillRect(double x, double y, double w, double h);
  ImageData getImageData(long sx, long sy, long sw, long sh);
  void fillText(DOMString text, double x, double y);
  attribute DOMString font;
};
""",
    "SVG": """
interface SVGFilterElement : SVGElement {
  void apply();
  readonly attribute SVGAnimatedLength width;
};
interface SVGNumberList {
  SVGNumber getItem(unsigned long index);
  SVGNumber appendItem(SVGNumber newItem);
  readonly attribute unsigned long numberOfItems;
};
interface SVGAnimationElement : SVGElement {
  void beginElement();
  float getStartTime();
};
""",
    "WEBA": """
interface AudioContext : BaseAudioContext {
  constructor();
  GainNode createGain();
  OscillatorNode createOscillator();
  AnalyserNode createAnalyser();
  readonly attribute double currentTime;
};
interface GainNode : AudioNode {
  readonly attribute AudioParam gain;
  attribute long channelCount;
};
""",
    "AJAX": """
interface XMLHttpRequest : XMLHttpRequestEventTarget {
  constructor();
  void open(ByteString method, USVString url);
  void send(optional any body);
  void setRequestHeader(ByteString name, ByteString value);
  readonly attribute unsigned short readyState;
  readonly attribute any response;
  attribute boolean withCredentials;
};
""",
    "HTML": """
interface HTMLDocument : Document {
  void write(DOMString... text);
  attribute DOMString designMode;
};
interface DataTransfer {
  void setData(DOMString format, DOMString data);
  DOMString getData(DOMString format);
  attribute DOMString dropEffect;
};
""",
    "HTML5": """
interface HTMLMediaElement : HTMLElement {
  void play();
  void pause();
  attribute double currentTime;
  readonly attribute boolean paused;
};
interface HTMLVideoElement : HTMLMediaElement {
  readonly attribute unsigned long videoWidth;
};
""",
    "SW": """
interface ServiceWorkerContainer : EventTarget {
  Promise<ServiceWorkerRegistration> register(USVString scriptURL);
  readonly attribute ServiceWorker? controller;
};
interface ServiceWorkerRegistration : EventTarget {
  Promise<boolean> unregister();
  Promise<void> update();
};
""",
    "H-WS": """
interface WebSocket : EventTarget {
  constructor(USVString url);
  void send(USVString data);
  void close(optional unsigned short code);
  readonly attribute unsigned short readyState;
  attribute DOMString binaryType;
};
""",
    "H-HI": """
interface History {
  void pushState(any data, DOMString title);
  void replaceState(any data, DOMString title);
  void go(optional long delta);
  readonly attribute unsigned long length;
};
""",
    "IDB": """
interface IDBFactory {
  IDBOpenDBRequest open(DOMString name);
  IDBOpenDBRequest deleteDatabase(DOMString name);
};
interface IDBObjectStore {
  IDBRequest put(any value);
  IDBRequest get(any query);
  IDBIndex createIndex(DOMString name, any keyPath);
  readonly attribute DOMString name;
};
""",
    "WCR": """
interface SubtleCrypto {
  Promise<any> encrypt(any algorithm, CryptoKey key, BufferSource data);
  Promise<any> digest(any algorithm, BufferSource data);
  Promise<any> generateKey(any algorithm, boolean extractable);
};
interface Crypto {
  ArrayBufferView getRandomValues(ArrayBufferView array);
  readonly attribute SubtleCrypto subtle;
};
""",
    "MCS": """
interface MediaDevices : EventTarget {
  Promise<MediaStream> getUserMedia(optional MediaStreamConstraints constraints);
  Promise<sequence<MediaDeviceInfo>> enumerateDevices();
};
interface MediaStream : EventTarget {
  sequence<MediaStreamTrack> getTracks();
  readonly attribute DOMString id;
};
""",
    "DOM2-H": """
interface HTMLFormElement : HTMLElement {
  void submit();
  void reset();
  attribute DOMString action;
};
interface HTMLSelectElement : HTMLElement {
  void add(HTMLElement element);
  attribute long selectedIndex;
};
""",
    "DOM2-T": """
interface Range {
  void setStart(Node node, unsigned long offset);
  void setEnd(Node node, unsigned long offset);
  DocumentFragment extractContents();
  readonly attribute boolean collapsed;
};
interface TreeWalker {
  Node? nextNode();
  attribute Node currentNode;
};
""",
    "HTML51": """
interface HTMLDialogElement : HTMLElement {
  void show();
  void showModal();
  attribute boolean open;
};
""",
    "RT": """
interface PerformanceResourceTiming : PerformanceEntry {
  readonly attribute DOMString initiatorType;
  readonly attribute double responseEnd;
};
""",
    "FULL": """
interface FullscreenControls {
  Promise<void> requestFullscreen();
  Promise<void> exitFullscreen();
  readonly attribute boolean fullscreenEnabled;
};
""",
    "BE": """
interface BeaconNavigator {
  boolean sendBeacon(USVString url, optional BodyInit data);
};
""",
    "DOM1": """
interface Document : Node {
  HTMLCollection getElementsByTagName(DOMString qualifiedName);
  Element createElement(DOMString localName);
  Text createTextNode(DOMString data);
  readonly attribute Element? documentElement;
};
interface Element : Node {
  void setAttribute(DOMString name, DOMString value);
  DOMString? getAttribute(DOMString name);
  readonly attribute DOMString tagName;
};
""",
    "DOM-PS": """
interface DOMParser {
  constructor();
  Document parseFromString(DOMString str, DOMString type);
};
interface XMLSerializer {
  constructor();
  DOMString serializeToString(Node root);
};
""",
    "DOM2-E": """
interface EventTarget {
  void addEventListener(DOMString type, EventListener? callback);
  void removeEventListener(DOMString type, EventListener? callback);
  boolean dispatchEvent(Event event);
};
""",
    "DOM2-S": """
interface CSSStyleDeclaration {
  DOMString getPropertyValue(DOMString property);
  void setProperty(DOMString property, DOMString value);
  attribute DOMString cssText;
  readonly attribute unsigned long length;
};
""",
    "F": """
interface GlobalFetch {
  Promise<Response> fetch(RequestInfo input, optional RequestInit init);
};
interface Response : Body {
  constructor(optional BodyInit? body);
  readonly attribute unsigned short status;
  Response clone();
};
""",
    "CSS-OM": """
interface CSSStyleSheet : StyleSheet {
  unsigned long insertRule(DOMString rule, optional unsigned long index);
  void deleteRule(unsigned long index);
  readonly attribute CSSRuleList cssRules;
};
""",
    "DOM": """
interface MutationObserver {
  constructor(MutationCallback callback);
  void observe(Node target, optional MutationObserverInit options);
  void disconnect();
};
interface DOMTokenList {
  void add(DOMString... tokens);
  boolean contains(DOMString token);
  readonly attribute unsigned long length;
};
""",
    "H-P": """
interface PluginArray {
  void refresh(optional boolean reload);
  Plugin? item(unsigned long index);
  readonly attribute unsigned long length;
};
""",
    "FA": """
interface FileReader : EventTarget {
  constructor();
  void readAsArrayBuffer(Blob blob);
  void readAsDataURL(Blob blob);
  readonly attribute any result;
};
interface Blob {
  Blob slice(optional long long start, optional long long end);
  readonly attribute unsigned long long size;
};
""",
    "GP": """
interface Gamepad {
  readonly attribute DOMString id;
  readonly attribute boolean connected;
};
""",
    "GEO": """
interface Geolocation {
  void getCurrentPosition(PositionCallback successCallback);
  long watchPosition(PositionCallback successCallback);
  void clearWatch(long watchId);
};
""",
    "HRT": """
interface Performance : EventTarget {
  double now();
  readonly attribute double timeOrigin;
};
""",
    "H-CM": """
interface MessageChannel {
  constructor();
  readonly attribute MessagePort port1;
  readonly attribute MessagePort port2;
};
interface MessagePort : EventTarget {
  void postMessage(any message);
  void start();
  void close();
};
""",
    "NT": """
interface PerformanceTiming {
  readonly attribute unsigned long long navigationStart;
  readonly attribute unsigned long long loadEventEnd;
};
""",
    "WN": """
interface Notification : EventTarget {
  constructor(DOMString title);
  void close();
  readonly attribute DOMString title;
};
""",
    "PV": """
interface VisibilityState {
  readonly attribute boolean hidden;
  readonly attribute DOMString visibilityState;
};
""",
    "UIE": """
interface MouseEvent : UIEvent {
  readonly attribute long screenX;
  readonly attribute long screenY;
  void initMouseEvent(DOMString typeArg);
};
interface KeyboardEvent : UIEvent {
  readonly attribute DOMString key;
  boolean getModifierState(DOMString keyArg);
};
""",
    "V": """
interface VibrationNavigator {
  boolean vibrate(any pattern);
};
""",
    "CO": """
interface Console {
  void log(any... data);
  void timeline(optional DOMString label);
  void warn(any... data);
};
""",
    "CSS-VM": """
interface Screen {
  readonly attribute long availWidth;
  readonly attribute long availHeight;
  readonly attribute long colorDepth;
};
interface ViewportScroll {
  void scrollTo(double x, double y);
  readonly attribute double scrollX;
};
""",
    "BA": """
interface BatteryManager : EventTarget {
  readonly attribute boolean charging;
  readonly attribute double chargingTime;
  readonly attribute double dischargingTime;
  readonly attribute double level;
};
""",
    "CSS-CR": """
interface CSSSupports {
  boolean supports(DOMString conditionText);
};
""",
    "CSS-FO": """
interface FontFace {
  constructor(DOMString family, any source);
  Promise<FontFace> load();
  attribute DOMString family;
};
interface FontFaceSet : EventTarget {
  boolean check(DOMString font);
  readonly attribute boolean status;
};
""",
    "DO": """
interface DeviceOrientationEvent : Event {
  readonly attribute double? alpha;
  readonly attribute double? beta;
  readonly attribute double? gamma;
};
""",
    "DOM2-C": """
interface Node : EventTarget {
  Node appendChild(Node node);
  Node removeChild(Node child);
  Node cloneNode(optional boolean deep);
  readonly attribute Node? parentNode;
  attribute DOMString? nodeValue;
};
""",
    "DOM3-C": """
interface NodeLevel3 {
  boolean isEqualNode(Node? otherNode);
  DOMString? lookupNamespaceURI(DOMString? prefix);
  attribute DOMString textContent;
};
""",
    "DOM3-X": """
interface XPathEvaluator {
  constructor();
  XPathResult evaluate(DOMString expression, Node contextNode);
  XPathExpression createExpression(DOMString expression);
};
""",
    "EME": """
interface MediaKeys {
  MediaKeySession createSession(optional MediaKeySessionType sessionType);
  Promise<boolean> setServerCertificate(BufferSource serverCertificate);
};
""",
    "H-WB": """
interface Storage {
  DOMString? getItem(DOMString key);
  void setItem(DOMString key, DOMString value);
  void removeItem(DOMString key);
  readonly attribute unsigned long length;
};
""",
    "MSE": """
interface MediaSource : EventTarget {
  constructor();
  SourceBuffer addSourceBuffer(DOMString type);
  void endOfStream();
  attribute unrestricted double duration;
};
""",
    "SLC": """
interface ParentNodeSelectors {
  Element? querySelector(DOMString selectors);
  NodeList querySelectorAll(DOMString selectors);
};
""",
    "TC": """
interface AnimationFrameProvider {
  unsigned long requestAnimationFrame(FrameRequestCallback callback);
  void cancelAnimationFrame(unsigned long handle);
};
""",
    "ALS": """
interface DeviceLightEvent : Event {
  readonly attribute unrestricted double value;
};
""",
    "PT2": """
interface PerformanceObserver {
  constructor(PerformanceObserverCallback callback);
  void observe(optional PerformanceObserverInit options);
  void disconnect();
};
""",
    "EC": """
interface EditingCommands {
  boolean execCommand(DOMString commandId);
  boolean queryCommandEnabled(DOMString commandId);
};
""",
    "H-B": """
interface BroadcastChannel : EventTarget {
  constructor(DOMString name);
  void postMessage(any message);
  readonly attribute DOMString name;
};
""",
    "PT": """
interface PerformanceEntryList {
  PerformanceEntryList getEntries();
  PerformanceEntryList getEntriesByType(DOMString type);
};
""",
    "PL": """
interface PointerLockElement {
  void requestPointerLock();
  readonly attribute Element? pointerLockElement;
};
""",
    "PE": """
interface DeviceProximityEvent : Event {
  readonly attribute unrestricted double value;
  readonly attribute unrestricted double max;
};
""",
    "SEL": """
interface Selection {
  void addRange(Range range);
  void removeAllRanges();
  readonly attribute unsigned long rangeCount;
};
""",
    "SO": """
interface ScreenOrientation : EventTarget {
  Promise<void> lock(OrientationLockType orientation);
  void unlock();
  readonly attribute OrientationType type;
};
""",
    "URL": """
interface URL {
  constructor(USVString url, optional USVString base);
  attribute USVString href;
  readonly attribute USVString origin;
};
""",
    "UT2": """
interface UserTiming {
  void mark(DOMString markName);
  void measure(DOMString measureName);
  void clearMarks(optional DOMString markName);
};
""",
    "DOM4": """
interface DOMRequestQueue {
  void enqueue(any request);
  readonly attribute unsigned long pending;
};
""",
    "VTT": """
interface VTTCue : TextTrackCue {
  constructor(double startTime, double endTime, DOMString text);
  attribute DOMString text;
};
""",
    "TE": """
interface TouchEvent : UIEvent {
  readonly attribute TouchList touches;
  readonly attribute TouchList changedTouches;
};
""",
    "CLIP": """
interface ClipboardEvent : Event {
  readonly attribute DataTransfer? clipboardData;
};
""",
    "ENC": """
interface TextEncoder {
  constructor();
  Uint8Array encode(optional USVString input);
};
interface TextDecoder {
  constructor(optional DOMString label);
  USVString decode(optional BufferSource input);
};
""",
    "NI": """
interface NetworkInformation : EventTarget {
  readonly attribute ConnectionType type;
};
""",
    "WSP": """
interface SpeechSynthesis : EventTarget {
  void speak(SpeechSynthesisUtterance utterance);
  void cancel();
  readonly attribute boolean speaking;
};
""",
    "WANI": """
interface Animation : EventTarget {
  void play();
  void pause();
  attribute double playbackRate;
};
""",
    "TMPL": """
interface HTMLTemplateElement : HTMLElement {
  readonly attribute DocumentFragment content;
};
""",
    "MSR": """
interface MediaRecorder : EventTarget {
  constructor(MediaStream stream);
  void start(optional long timeslice);
  void stop();
  readonly attribute DOMString mimeType;
};
""",
}

# Native implementation class used for a standard's call-graph nodes.
NATIVE_CLASS = {
    "WEBGL": "WebGLContext", "H-WW": "WorkerPrivate", "WRTC": "PeerConnectionImpl",
    "H-C": "CanvasRenderingContext2D", "SVG": "SVGAnimationController",
    "WEBA": "AudioNodeEngine", "AJAX": "XMLHttpRequestMainThread",
    "HTML": "DataTransferItemList", "HTML5": "HTMLMediaElementImpl",
    "SW": "ServiceWorkerManager", "H-WS": "WebSocketChannel",
    "H-HI": "SessionHistoryEntry", "IDB": "IDBTransactionImpl",
    "WCR": "WebCryptoTask", "MCS": "MediaManager", "DOM2-H": "HTMLFormSubmission",
    "DOM2-T": "RangeUtils", "HTML51": "HTMLDialogImpl", "RT": "PerformanceResourceTimingImpl",
    "FULL": "FullscreenRequest", "BE": "BeaconSender", "DOM1": "DocumentImpl",
    "DOM-PS": "DOMParserImpl", "DOM2-E": "EventListenerManager",
    "DOM2-S": "DeclarationBlock", "F": "FetchDriver", "CSS-OM": "StyleSheetImpl",
    "DOM": "MutationObserverImpl", "H-P": "PluginArrayImpl", "FA": "FileReaderImpl",
    "GP": "GamepadService", "GEO": "GeolocationService", "HRT": "PerformanceClock",
    "H-CM": "MessagePortService", "NT": "NavigationTimingImpl",
    "WN": "NotificationWorker", "PV": "VisibilityTracker", "UIE": "UIEventImpl",
    "V": "VibrationHal",
}

VERBS = ["Init", "Dispatch", "Validate", "Update", "Flush", "Resize", "Serialize", "Teardown"]

MULTI_CVES = [
    # (standard a, standard b, severe?)
    ("H-WW", "HRT", False),
    ("WEBGL", "H-CM", False),
    ("SVG", "UIE", False),
    ("MCS", "WRTC", True),
    ("H-C", "WEBGL", True),
    ("HTML", "DOM2-H", True),
    ("AJAX", "F", False),
    ("DOM1", "DOM", True),
    ("HTML5", "H-HI", False),
    ("SW", "F", False),
    ("DOM2-E", "DOM2-S", False),
    ("CSS-OM", "AJAX", False),
    ("PV", "V", True),
]

# Primary route for single-standard CVEs beyond the standard-name default.
ROUTE_ORDER = ["standard_name", "js_endpoint", "native_symbol", "functionality_keyword"]

ROUTE_QUOTA = {
    "js_endpoint": [("WEBGL", 6), ("H-WW", 4), ("WRTC", 4), ("H-C", 4), ("WEBA", 3),
                    ("AJAX", 3), ("IDB", 2), ("SVG", 2), ("H-WS", 2), ("MCS", 1),
                    ("DOM2-T", 1)],
    "native_symbol": [("WEBGL", 6), ("SVG", 3), ("WRTC", 3), ("H-C", 2), ("WEBA", 2),
                      ("H-WW", 2), ("AJAX", 1), ("IDB", 1), ("SW", 1)],
    "functionality_keyword": [("HTML", 3), ("FULL", 1), ("H-HI", 1)],
}

FUNCTIONALITY = {"HTML": "drag-and-drop", "FULL": "full-screen mode", "H-HI": "session history navigation"}

# Distinct phrase that names each standard in CVE text.
NAME_PHRASE = {
    "WEBGL": "WebGL", "H-WW": "Web Workers", "WRTC": "WebRTC", "H-C": "canvas element",
    "SVG": "SVG", "WEBA": "Web Audio", "AJAX": "XMLHttpRequest API", "HTML": "HTML standard",
    "HTML5": "HTML5", "SW": "Service Workers", "H-WS": "WebSockets",
    "H-HI": "History API", "IDB": "IndexedDB", "WCR": "Web Crypto", "MCS": "Media Capture",
    "DOM2-H": "DOM Level 2 HTML", "DOM2-T": "DOM Range", "HTML51": "HTML 5.1",
    "RT": "Resource Timing", "FULL": "Fullscreen API", "BE": "Beacon API",
    "DOM1": "DOM Level 1", "DOM-PS": "DOMParser", "DOM2-E": "DOM Level 2 Events",
    "DOM2-S": "DOM Level 2 Style", "F": "Fetch API", "CSS-OM": "CSS Object Model",
    "DOM": "DOM Standard", "H-P": "Plugins API", "FA": "File API",
    "GP": "Gamepad API", "GEO": "Geolocation API", "HRT": "High Resolution Time",
    "H-CM": "Channel Messaging", "NT": "Navigation Timing", "WN": "Web Notifications",
    "PV": "Page Visibility", "UIE": "UI Events", "V": "Vibration API",
}

FLAWS = [
    ("Use-after-free vulnerability", "execute arbitrary code via crafted content"),
    ("Heap-based buffer overflow", "execute arbitrary code or cause a denial of service"),
    ("Integer overflow", "cause a denial of service (memory corruption) via a crafted page"),
    ("Out-of-bounds read", "obtain sensitive information from process memory"),
    ("Race condition", "bypass the same origin policy via crafted script timing"),
    ("Type confusion", "execute arbitrary code via unexpected object types"),
]

UNATTRIBUTED = [
    "Multiple unspecified vulnerabilities in the browser engine allow remote attackers to cause a denial of service (memory corruption and application crash).",
    "The JavaScript JIT compiler mishandles register allocation, which allows remote attackers to execute arbitrary code.",
    "The layout engine does not properly handle frame reflow, allowing remote attackers to cause a denial of service.",
    "The networking stack mishandles malformed HTTP/2 frames, allowing remote attackers to cause a crash.",
    "The font shaping library reads past the end of a glyph buffer when handling crafted fonts.",
    "The updater does not verify file permissions on the staging directory, allowing local users to gain privileges.",
    "The certificate verifier accepts some malformed signatures, allowing spoofing of TLS servers.",
    "The JavaScript garbage collector frees a live object during incremental sweeping.",
    "The image decoder does not validate PNG chunk lengths, allowing remote attackers to read uninitialized memory.",
    "The address bar can be spoofed with a crafted sequence of navigations.",
]

DISCARDS = [
    ("Adobe Flash Player before 11.2.202.236 allows attackers to execute arbitrary code via crafted SWF content loaded in a browser.", "Adobe Flash Player"),
    ("Cross-site scripting vulnerability in a web mail application exploitable through Firefox via a crafted message.", "Mozilla Firefox"),
    ("Adobe Flash Player plugin allows remote attackers to bypass sandbox restrictions.", "Adobe Flash Player"),
    ("Java plugin deployment toolkit allows remote code execution from a web page.", "Java plugin"),
    ("QuickTime plugin heap overflow triggered via a crafted movie embedded in a page.", "QuickTime"),
]


def build_rows():
    rows = []
    for name, abbrev, using, brk, agree, cves, sev, pct, attacks in REFERENCE:
        rows.append(dict(name=name, abbrev=abbrev, using=using, brk=brk, agree=agree,
                         cves=cves, severe=sev, pct=pct, attacks=attacks, filler=False))
    for name, abbrev, using, weight, group in FILLERS:
        rows.append(dict(name=name, abbrev=abbrev, using=using, brk="0%",
                         agree="100%" if using else "-", cves=0, severe=0, pct=None,
                         attacks=0, filler=True, weight=weight, group=group))
    return rows


def split(total, weights):
    acc = sum(weights)
    out = [total * w // acc for w in weights]
    out[-1] += total - sum(out)
    return out


def assign_lines(rows):
    by = {r["abbrev"]: r for r in rows}
    for r in rows:
        if not r["filler"]:
            r["lines"] = int(round(float(r["pct"]) * TOTAL_ELOC / 100))
    cons_listed = sum(by[a]["lines"] for a in CONSERVATIVE if not by[a]["filler"])
    by["PT2"]["lines"] = CONSERVATIVE_LINES - cons_listed
    agg_listed = sum(by[a]["lines"] for a in AGGRESSIVE_ONLY if not by[a]["filler"])
    agg_fill = [by[a] for a in AGGRESSIVE_ONLY if by[a]["filler"]]
    for r, n in zip(agg_fill, split(AGGRESSIVE_LINES - CONSERVATIVE_LINES - agg_listed,
                                    [r["weight"] for r in agg_fill])):
        r["lines"] = n
    rest = [r for r in rows if r["filler"] and r["group"] == "none"]
    used = sum(r["lines"] for r in rows if "lines" in r)
    for r, n in zip(rest, split(TOTAL_ELOC - used, [r["weight"] for r in rest])):
        r["lines"] = n
    assert sum(r["lines"] for r in rows) == TOTAL_ELOC
    for r in rows:
        share = r["lines"] / TOTAL_ELOC * 100
        if r["filler"]:
            assert 0 < share < 1, (r["abbrev"], share)
            r["pct"] = f"{share:.2f}"
        else:
            assert f"{share:.2f}" == r["pct"], (r["abbrev"], share, r["pct"])


def render_break(w):
    if w == 0:
        return "0%"
    if w < 0.01:
        return "<1%"
    return f"{int(math.floor(w * 100 + 0.5))}%"


def choose_pairs(row):
    u = row["using"] / POPULATION
    if row["using"] == 0:
        return 0, 0
    base = min(40, row["using"])
    if row["abbrev"] == "DOM1":
        return 42, 29
    if row["brk"] == "0%":
        return base, 0
    for n in sorted(range(max(1, base - 12), base + 8), key=lambda n: (abs(n - base), n)):
        for k in range(0, n + 1):
            if render_break(k / n * u) == row["brk"]:
                return n, k
    raise SystemExit(f"no pairing for {row['abbrev']}")


def parse_agree(s):
    if s in ("-",):
        return 1.0
    if s.endswith("%"):
        return float(s[:-1]) / 100
    return 1.0 - float(s)


def benefit_fixture(rows):
    for r in rows:
        r["n"], r["k"] = choose_pairs(r)
    total = sum(r["n"] for r in rows)
    target = round(total * (1 - POOLED_AGREEMENT))
    caps = {r["abbrev"]: r["n"] - r["k"] for r in rows}
    ideal = {r["abbrev"]: (1 - parse_agree(r["agree"])) * r["n"] for r in rows}
    d = {a: min(caps[a], int(ideal[a])) for a in ideal}
    order = sorted(ideal, key=lambda a: (-(ideal[a] - int(ideal[a])), a))
    i = 0
    while sum(d.values()) < target:
        a = order[i % len(order)]
        if d[a] < caps[a]:
            d[a] += 1
        i += 1
    while sum(d.values()) > target:
        a = max(d, key=lambda a: (d[a] - ideal[a], a))
        d[a] -= 1
    for r in rows:
        r["d"] = d[r["abbrev"]]
    agree = 1 - sum(d.values()) / total
    assert abs(agree - POOLED_AGREEMENT) <= 0.0005, agree

    rng = random.Random(1679)
    tests = []
    for r in rows:
        sites = rng.sample(range(1, POPULATION + 1), r["n"])
        scores = [(3, 3)] * r["k"]
        for j in range(r["d"]):
            scores.append((3, 2) if r["k"] and j % 2 == 0 else (1, 2))
        rest = r["n"] - len(scores)
        scores += [(2, 2) if j % 7 == 3 else (1, 1) for j in range(rest)]
        for site, (a, b) in zip(sites, scores):
            if rng.random() < 0.5:
                a, b = b, a
            host = f"site{site:05d}.example"
            tests.append((host, r["abbrev"], "w1", a))
            tests.append((host, r["abbrev"], "w2", b))
    tests.sort()
    return tests, agree


def parse_interfaces(idl):
    out = []
    for m in re.finditer(r"interface\s+([A-Za-z_][A-Za-z0-9_]*)\s*(?::\s*\w+\s*)?\{(.*?)\};", idl, re.S):
        members = []
        for line in m.group(2).strip().splitlines():
            line = line.strip().rstrip(";")
            if not line:
                continue
            if line.startswith("constructor"):
                members.append(("constructor", "constructor"))
            elif "attribute" in line.split():
                name = line.split()[-1]
                members.append(("attribute", name))
            else:
                name = re.search(r"([A-Za-z_][A-Za-z0-9_]*)\s*\(", line).group(1)
                members.append(("method", name))
        out.append((m.group(1), members))
    return out


def callgraph_fixture(rows):
    rng = random.Random(7565)
    nodes = []  # id, display, kind, loc, standard, third_party
    edges = set()
    native_symbols = {}

    shared = [f"core.{i:02d}" for i in range(24)]
    shared_names = ["nsContentUtils::CheckSameOrigin", "nsINode::GetOwnerDoc", "js::NewObject",
                    "nsThreadUtils::Dispatch", "nsString::Assign", "ErrorResult::Throw",
                    "nsJSUtils::GetCallingLocation", "nsIGlobalObject::GetAsSupports",
                    "mozilla::ipc::MessageChannel::Send", "gfxPlatform::GetPlatform",
                    "nsPresContext::PresShell", "nsCycleCollector::Suspect",
                    "mozilla::Preferences::GetBool", "nsIPrincipal::Subsumes",
                    "nsNetUtil::NewChannel", "mozilla::MediaDecoder::Play",
                    "mozilla::gl::GLContext::MakeCurrent", "nsStyleContext::Resolve",
                    "nsDocument::FlushPendingNotifications", "JS_WrapObject",
                    "mozilla::dom::Promise::Create", "nsTimerImpl::InitCommon",
                    "mozilla::layers::ImageContainer::SetCurrentImages",
                    "nsIInputStream::ReadSegments"]
    for sid, name in zip(shared, shared_names):
        nodes.append((sid, name, "implementation", 900 + rng.randrange(4000), "", "false"))
    roots = [("root.startup", "XRE_main"), ("root.layout", "nsLayoutModule::Initialize"),
             ("root.idle", "nsThread::ProcessNextEvent")]
    for rid, name in roots:
        nodes.append((rid, name, "implementation", 120, "", "false"))
    for i, sid in enumerate(shared):
        edges.add((roots[i % len(roots)][0], sid))
        if i + 1 < len(shared):
            edges.add((sid, shared[i + 1]))
    # dead code: an unreferenced helper and an orphan cycle
    nodes.append(("dead.helper", "nsObsoleteHelper::Run", "implementation", 75, "", "false"))
    nodes.append(("dead.cycle.a", "nsLegacyTimer::Fire", "implementation", 40, "", "false"))
    nodes.append(("dead.cycle.b", "nsLegacyTimer::Rearm", "implementation", 35, "", "false"))
    edges.add(("dead.helper", shared[3]))
    edges.add(("dead.cycle.a", "dead.cycle.b"))
    edges.add(("dead.cycle.b", "dead.cycle.a"))

    all_bindings = {}
    for r in rows:
        a = r["abbrev"]
        binds = []
        for iface, members in parse_interfaces(IDL[a]):
            for kind, member in members:
                kinds = ["constructor"] if kind == "constructor" else ["method"] if kind == "method" else ["attribute_get"]
                if kind == "attribute":
                    ro = re.search(rf"readonly\s+attribute\s+[^;]*\b{member};", IDL[a])
                    if not ro:
                        kinds.append("attribute_set")
                for k in kinds:
                    bid = f"b.{iface}.{member}.{k}"
                    suffix = {"method": "", "constructor": "", "attribute_get": "_getter", "attribute_set": "_setter"}[k]
                    disp = f"mozilla::dom::{iface}Binding::{member}{suffix}"
                    nodes.append((bid, disp, "binding", 12 + rng.randrange(30), a, "false"))
                    binds.append(bid)
        all_bindings[a] = binds
        lines = r["lines"]
        cls = NATIVE_CLASS.get(a, re.sub(r"[^A-Za-z]", "", parse_interfaces(IDL[a])[0][0]) + "Impl")
        m = 0 if lines == 0 else max(1, min(6, len(binds), 1 + lines // 2500))
        parts = split(lines, [3 + (j % 3) for j in range(m)]) if m else []
        impls = []
        for j, loc in enumerate(parts):
            iid = f"i.{a}.{j}"
            disp = f"mozilla::dom::{cls}::{VERBS[j]}"
            nodes.append((iid, disp, "implementation", loc, "", "false"))
            impls.append(iid)
            native_symbols.setdefault(a, []).append(f"{cls}::{VERBS[j]}")
        # entry edges: first binding(s) call only the head; the tail is only
        # reachable through other implementation functions
        for j, bid in enumerate(binds):
            if impls:
                edges.add((bid, impls[0] if len(impls) < 3 else impls[j % 2]))
            edges.add((bid, shared[(j + len(a)) % len(shared)]))
        for j in range(1, len(impls)):
            edges.add((impls[j - 1], impls[j]))
        if len(impls) >= 3:
            edges.add((impls[-1], impls[1]))  # cycle kept inside the standard
        for j, iid in enumerate(impls):
            edges.add((iid, shared[(j * 5 + len(a) * 3) % len(shared)]))
    # binding of one standard calling another standard's binding: blocks traversal
    edges.add(("b.IDBObjectStore.put.method", "b.EventTarget.dispatchEvent.method"))
    edges.add(("b.Worker.postMessage.method", "b.MessagePort.postMessage.method"))
    # third-party code used only by WebRTC, excluded from ELoC by default
    nodes.append(("tp.webrtc", "webrtc::VoiceEngineImpl::Init", "implementation", 512000, "", "true"))
    edges.add(("i.WRTC.0", "tp.webrtc"))
    return nodes, sorted(edges), native_symbols


def word_match(text, pattern):
    t, p = text.lower(), pattern.lower()
    start = 0
    while True:
        i = t.find(p, start)
        if i < 0:
            return False
        before_ok = i == 0 or not (t[i - 1].isalnum() or t[i - 1] == "_") or not (p[0].isalnum() or p[0] == "_")
        j = i + len(p)
        after_ok = j == len(t) or not (t[j].isalnum() or t[j] == "_") or not (p[-1].isalnum() or p[-1] == "_")
        if before_ok and after_ok:
            return True
        start = i + 1


def cve_fixture(rows, native_symbols):
    by = {r["abbrev"]: r for r in rows}
    remaining = {r["abbrev"]: r["cves"] for r in rows}
    severe_left = {r["abbrev"]: r["severe"] for r in rows}
    mild_left = {r["abbrev"]: r["cves"] - r["severe"] for r in rows}
    records = []
    rules = set()
    counter = [0]

    def next_id(year):
        counter[0] += 1
        return f"CVE-{year}-{90000 + counter[0]}"

    def take(a, severe):
        pool = severe_left if severe else mild_left
        assert pool[a] > 0, (a, severe)
        pool[a] -= 1
        remaining[a] -= 1

    years = [2010, 2011, 2012, 2013, 2014, 2015, 2016]

    def severity(severe, i):
        if severe:
            return "severe" if i % 3 == 0 else "high"
        return "moderate" if i % 2 == 0 else "low"

    for a in NAME_PHRASE:
        rules.add(("standard_name", NAME_PHRASE[a], a, "false"))

    i = 0
    for a, b, sev in MULTI_CVES:
        take(a, sev)
        take(b, sev)
        flaw, impact = FLAWS[i % len(FLAWS)]
        desc = (f"{flaw} in the interaction between the {NAME_PHRASE[a]} and {NAME_PHRASE[b]} "
                f"implementations in Mozilla Firefox allows remote attackers to {impact}.")
        year = years[i % len(years)]
        records.append(dict(id=next_id(year), description=desc, severity=severity(sev, i),
                            product_hint="Mozilla Firefox", expect=sorted([a, b]), route="standard_name"))
        i += 1

    route_slots = []
    for route, quota in ROUTE_QUOTA.items():
        for a, n in quota:
            route_slots += [(route, a)] * n

    js_index = {}
    sym_index = {}
    for route, a in route_slots:
        sev = severe_left[a] > 0 and (mild_left[a] == 0 or i % 2 == 0)
        take(a, sev)
        flaw, impact = FLAWS[i % len(FLAWS)]
        if route == "js_endpoint":
            ifaces = parse_interfaces(IDL[a])
            eps = [f"{iface}.{m}" for iface, ms in ifaces for kind, m in ms if kind == "method"]
            ep = eps[js_index.get(a, 0) % len(eps)]
            js_index[a] = js_index.get(a, 0) + 1
            rules.add(("js_endpoint", ep, a, "false"))
            desc = f"{flaw} in the {ep} method in Mozilla Firefox allows remote attackers to {impact}."
        elif route == "native_symbol":
            syms = native_symbols[a]
            sym = syms[sym_index.get(a, 0) % len(syms)]
            sym_index[a] = sym_index.get(a, 0) + 1
            rules.add(("native_symbol", sym, a, "false"))
            desc = f"{flaw} in the {sym} function in Mozilla Firefox allows remote attackers to {impact}."
        else:
            kw = FUNCTIONALITY[a]
            rules.add(("functionality_keyword", kw, a, "false"))
            desc = f"{flaw} in the handling of {kw} events in Mozilla Firefox allows remote attackers to {impact}."
        year = years[i % len(years)]
        records.append(dict(id=next_id(year), description=desc, severity=severity(sev, i),
                            product_hint="Mozilla Firefox", expect=[a], route=route))
        i += 1

    # the reference record from the literature review counts toward SVG
    take("SVG", True)
    records.append(dict(id="CVE-2011-2363",
                        description="Use-after-free vulnerability in the SVG animation DOM bindings in Mozilla Firefox before 5.0 allows remote attackers to execute arbitrary code via script that manipulates SVG animations.",
                        severity="severe", product_hint="Mozilla Firefox", expect=["SVG"], route="standard_name"))

    for a in sorted(remaining):
        while remaining[a] > 0:
            sev = severe_left[a] > 0 and (mild_left[a] == 0 or i % 2 == 0)
            take(a, sev)
            flaw, impact = FLAWS[i % len(FLAWS)]
            desc = (f"{flaw} in the {NAME_PHRASE[a]} implementation in Mozilla Firefox "
                    f"allows remote attackers to {impact}.")
            year = years[i % len(years)]
            records.append(dict(id=next_id(year), description=desc, severity=severity(sev, i),
                                product_hint="Mozilla Firefox", expect=[a], route="standard_name"))
            i += 1
    assert all(v == 0 for v in remaining.values())
    assert all(v == 0 for v in severe_left.values())

    # a non-DOM SVG flaw that a negative rule keeps out
    records.append(dict(id="CVE-2015-0818",
                        description="Mozilla Firefox before 36.0.4 permits privilege escalation through its SVG image rendering path when a crafted document is loaded.",
                        severity="high", product_hint="Mozilla Firefox", expect=[], route=None))
    rules.add(("functionality_keyword", "SVG image rendering", "SVG", "true"))

    for j, text in enumerate(UNATTRIBUTED * 4):
        year = years[j % len(years)]
        records.append(dict(id=next_id(year), description=text, severity=severity(j % 3 == 0, j),
                            product_hint="Mozilla Firefox", expect=[], route=None))
    discards = []
    for j, (text, hint) in enumerate(DISCARDS * 2):
        discards.append(dict(id=next_id(years[j % len(years)]), description=text,
                             severity="high", product_hint=hint))
    discards.append(dict(id="CVE-2009-93001", description="Use-after-free vulnerability in the WebGL implementation in an early Firefox beta.",
                         severity="high", product_hint="Mozilla Firefox"))

    rules = sorted(rules)
    # verify each kept record attributes exactly as intended
    for rec in records:
        hit = {t for route, p, t, neg in rules if neg == "false" and word_match(rec["description"], p)}
        hit -= {t for route, p, t, neg in rules if neg == "true" and word_match(rec["description"], p)}
        assert sorted(hit) == rec["expect"], (rec["id"], rec["description"], hit, rec["expect"])
        routes = {route for route, p, t, neg in rules if neg == "false" and t in hit and word_match(rec["description"], p)}
        primary = min(routes, key=ROUTE_ORDER.index) if routes else None
        assert primary == rec["route"], (rec["id"], routes, rec["route"])
    return records, discards, rules


def to_csv(header, rows):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def policy_doc(name, blocked):
    doc = {"version": 1, "name": name, "blocked": sorted(blocked), "whitelist": ["WCR"],
           "per_origin": {}, "debug": False}
    return json.dumps(doc, indent=2) + "\n"


def battery_fixture():
    nodes = [
        ("B_charging", "mozilla::dom::BatteryManagerBinding::get_charging", "binding", 5, "BA", "false"),
        ("B_chargingTime", "mozilla::dom::BatteryManagerBinding::get_chargingTime", "binding", 5, "BA", "false"),
        ("B_dischargingTime", "mozilla::dom::BatteryManagerBinding::get_dischargingTime", "binding", 5, "BA", "false"),
        ("I_charging", "mozilla::dom::battery::BatteryManager::Charging", "implementation", 10, "", "false"),
        ("I_chargingTime", "mozilla::dom::battery::BatteryManager::ChargingTime", "implementation", 20, "", "false"),
        ("I_dischargingTime", "mozilla::dom::battery::BatteryManager::DischargingTime", "implementation", 30, "", "false"),
        ("I_shared", "mozilla::hal::GetCurrentBatteryInformation", "implementation", 40, "", "false"),
        ("X_otherBinding", "mozilla::dom::GeolocationBinding::getCurrentPosition", "binding", 5, "GEO", "false"),
    ]
    edges = [("B_charging", "I_charging"), ("B_dischargingTime", "I_dischargingTime"),
             ("B_chargingTime", "I_chargingTime"), ("I_charging", "I_chargingTime"),
             ("I_charging", "I_shared"), ("X_otherBinding", "I_shared")]
    return nodes, edges


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--out", default=str(Path(__file__).resolve().parent.parent / "fixtures"))
    out = Path(ap.parse_args().out)
    (out / "idl").mkdir(parents=True, exist_ok=True)
    (out / "battery").mkdir(parents=True, exist_ok=True)
    (out / "presets").mkdir(parents=True, exist_ok=True)

    rows = build_rows()
    assert len(rows) == 74
    assert len({r["abbrev"] for r in rows}) == 74
    assign_lines(rows)
    tests, agree = benefit_fixture(rows)

    mapping = []
    for r in rows:
        idl = IDL[r["abbrev"]].lstrip("\n")
        fname = r["abbrev"].lower().replace("-", "_") + ".idl"
        (out / "idl" / fname).write_text(idl)
        for iface, _ in parse_interfaces(idl):
            mapping.append((iface, r["name"], r["abbrev"]))
    mapping.sort()
    assert len({m[0] for m in mapping}) == len(mapping)
    (out / "standards.csv").write_text(to_csv(["interface", "standard_name", "abbreviation"], mapping))

    nodes, edges, symbols = callgraph_fixture(rows)
    (out / "nodes.csv").write_text(to_csv(["id", "display_name", "kind", "loc", "standard", "third_party"], nodes))
    (out / "edges.csv").write_text(to_csv(["caller_id", "callee_id"], edges))

    bnodes, bedges = battery_fixture()
    (out / "battery" / "nodes.csv").write_text(to_csv(["id", "display_name", "kind", "loc", "standard", "third_party"], bnodes))
    (out / "battery" / "edges.csv").write_text(to_csv(["caller_id", "callee_id"], bedges))

    records, discards, rules = cve_fixture(rows, symbols)
    allrec = [{k: r[k] for k in ("id", "description", "severity", "product_hint")} for r in records + discards]
    allrec.sort(key=lambda r: r["id"])
    (out / "cves.jsonl").write_text("".join(json.dumps(r) + "\n" for r in allrec))
    (out / "rules.csv").write_text(to_csv(["route", "pattern", "target_abbrev", "negate"], rules))
    (out / "discard_keywords.txt").write_text("Adobe Flash Player\nJava plugin\nQuickTime\nexploitable through Firefox\n")

    (out / "site_tests.csv").write_text(to_csv(["site", "standard_abbrev", "tester", "score"], tests))
    usage = sorted((r["abbrev"], r["using"], POPULATION) for r in rows)
    (out / "usage.csv").write_text(to_csv(["standard_abbrev", "sites_using", "population"], usage))
    attacks = sorted((r["abbrev"], r["attacks"]) for r in rows)
    (out / "attacks.csv").write_text(to_csv(["standard_abbrev", "attack_papers"], attacks))

    ref = sorted((r["name"], r["abbrev"], r["using"], r["brk"], r["agree"], r["cves"], r["severe"],
                  r["pct"], r["attacks"], "true" if r["filler"] else "false", r["n"], r["k"], r["lines"])
                 for r in rows)
    (out / "reference_table.csv").write_text(to_csv(
        ["standard_name", "abbreviation", "sites_using", "site_break_rate", "agreement", "cve_count",
         "high_or_severe_count", "eloc_percent", "attack_papers", "filler", "paired_sites",
         "broken_sites", "eloc"], ref))

    (out / "presets" / "conservative.json").write_text(policy_doc("conservative", CONSERVATIVE))
    (out / "presets" / "aggressive.json").write_text(policy_doc("aggressive", CONSERVATIVE + AGGRESSIVE_ONLY))

    manifest = {
        "idl": ["idl"],
        "mapping": "standards.csv",
        "nodes": "nodes.csv",
        "edges": "edges.csv",
        "cves": "cves.jsonl",
        "rules": "rules.csv",
        "discard_keywords": "discard_keywords.txt",
        "tests": "site_tests.csv",
        "usage": "usage.csv",
        "attacks": "attacks.csv",
        "policies": ["presets/conservative.json", "presets/aggressive.json"],
    }
    (out / "manifest.json").write_text(json.dumps(manifest, indent=2) + "\n")
    print(f"wrote fixtures to {out} (pooled agreement {agree:.5f}, {len(tests) // 2} pairs, "
          f"{len(records)} kept CVE records, {len(discards)} discards)")


if __name__ == "__main__":
    main()
